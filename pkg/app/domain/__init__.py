"""Domain layer - semigroups, categories, cones and their morphisms."""

"""Infrastructure layer - text formats, diagrams and run observability."""

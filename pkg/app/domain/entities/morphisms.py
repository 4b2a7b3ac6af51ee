"""Structure-preserving maps between semigroups, categories and connected categories."""

from dataclasses import dataclass, field
from typing import Dict, Tuple

from app.domain.entities.category import FiniteCategory
from app.domain.entities.connected import ConnectedCategory
from app.domain.entities.semigroup import FiniteSemigroup


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """Element map between semigroups, ``mapping[a]`` is the image of a."""

    source: FiniteSemigroup
    target: FiniteSemigroup
    mapping: Tuple[int, ...]

    def __post_init__(self):
        """Validate entity after initialization."""
        object.__setattr__(self, "mapping", tuple(int(x) for x in self.mapping))
        if len(self.mapping) != self.source.size:
            raise ValueError("Homomorphism must send every source element")
        if any(x < 0 or x >= self.target.size for x in self.mapping):
            raise ValueError("Homomorphism image outside the target")

    def __getitem__(self, a: int) -> int:
        return self.mapping[a]

    @property
    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.mapping)) == self.source.size

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Left-to-right composite: first self, then other."""
        return Homomorphism(self.source, other.target, tuple(other[x] for x in self.mapping))


@dataclass(frozen=True, eq=False)
class SemigroupIso(Homomorphism):
    """Bijective homomorphism; ``anti`` marks an anti-isomorphism ((ab)φ = bφ·aφ)."""

    anti: bool = False

    def __post_init__(self):
        super().__post_init__()
        if not self.is_bijective:
            raise ValueError("Isomorphism must be a bijection")

    def inverse(self) -> "SemigroupIso":
        back = [0] * self.target.size
        for a, b in enumerate(self.mapping):
            back[b] = a
        return SemigroupIso(self.target, self.source, tuple(back), anti=self.anti)


@dataclass(frozen=True, eq=False)
class CategoryIso:
    """Object and morphism bijections between two finite categories."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: Tuple[int, ...]
    morphism_map: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CCMorphism:
    """Pair (F, G): a functor between the categories and an order map between the down-sets.

    ``class_map`` sends R-class indices of the source's full cone semigroup
    to R-class indices of the target's.
    """

    source: ConnectedCategory
    target: ConnectedCategory
    object_map: Tuple[int, ...]
    morphism_map: Tuple[int, ...]
    class_map: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        """Validate entity after initialization."""
        object.__setattr__(self, "object_map", tuple(int(x) for x in self.object_map))
        object.__setattr__(self, "morphism_map", tuple(int(x) for x in self.morphism_map))
        if len(self.object_map) != self.source.category.num_objects:
            raise ValueError("Object map must send every source object")
        if len(self.morphism_map) != self.source.category.num_morphisms:
            raise ValueError("Morphism map must send every source morphism")

    @property
    def is_bijective(self) -> bool:
        src, dst = self.source.category, self.target.category
        return (
            len(set(self.object_map)) == src.num_objects == dst.num_objects
            and len(set(self.morphism_map)) == src.num_morphisms == dst.num_morphisms
            and len(set(self.class_map.values())) == len(self.source.downset) == len(self.target.downset)
        )

    def __repr__(self) -> str:
        return f"CCMorphism({self.source.name} -> {self.target.name})"

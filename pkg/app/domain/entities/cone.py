"""Cone domain entities."""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Tuple

from app.domain.entities.category import FiniteCategory
from app.domain.entities.semigroup import FiniteSemigroup


@dataclass(frozen=True)
class Cone:
    """Cone with vertex ``vertex``: one component morphism c -> vertex per object c."""

    vertex: int
    components: Tuple[int, ...]

    def __post_init__(self):
        """Validate entity after initialization."""
        object.__setattr__(self, "components", tuple(int(x) for x in self.components))
        object.__setattr__(self, "vertex", int(self.vertex))

    def __getitem__(self, obj: int) -> int:
        return self.components[obj]

    def label(self, category: FiniteCategory) -> str:
        """Serialized form ``vertex; c0:morph c1:morph ...``."""
        parts = " ".join(
            f"{category.object_labels[c]}:{category.morphism_labels[m]}" for c, m in enumerate(self.components)
        )
        return f"{category.object_labels[self.vertex]}; {parts}"


@dataclass(frozen=True, eq=False)
class ConeSemigroup:
    """Enumerated semigroup of cones of a normal category.

    ``semigroup`` holds the multiplication table; element i is ``cones[i]``.
    For a connection semigroup ``parent`` maps each element to its index in
    the full cone semigroup.
    """

    category: FiniteCategory
    cones: Tuple[Cone, ...]
    semigroup: FiniteSemigroup
    parent: Optional[Tuple[int, ...]] = None

    @property
    def size(self) -> int:
        return len(self.cones)

    @property
    def table(self):
        return self.semigroup.table

    @cached_property
    def index(self) -> Dict[Cone, int]:
        return {cone: i for i, cone in enumerate(self.cones)}

    def vertex(self, i: int) -> int:
        return self.cones[i].vertex

    def __repr__(self) -> str:
        return f"ConeSemigroup({self.category.name or 'C'}, size={self.size})"

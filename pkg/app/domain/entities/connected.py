"""Connected category domain entities."""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from app.domain.entities.category import FiniteCategory, LeftCategory
from app.domain.entities.cone import ConeSemigroup


@dataclass(frozen=True, eq=False)
class ConnectedCategory:
    """Normal category connected by a down-set of R-classes of its cone semigroup.

    ``downset`` holds R-class indices of ``full`` (as numbered by its Green's
    data); ``connection[(c, d)]`` is the index in ``full`` of the idempotent
    cone ε(c, d) with vertex c in class d.
    """

    category: FiniteCategory
    full: ConeSemigroup
    downset: Tuple[int, ...]
    connection: Dict[Tuple[int, int], int]
    class_labels: Dict[int, str] = field(default_factory=dict)
    source: Optional[LeftCategory] = None
    name: str = ""

    def epsilon(self, c: int, d: int) -> Optional[int]:
        return self.connection.get((c, d))

    def classes_connecting(self, c: int) -> Tuple[int, ...]:
        return tuple(d for d in self.downset if (c, d) in self.connection)

    def objects_connected_by(self, d: int) -> Tuple[int, ...]:
        return tuple(c for c in range(self.category.num_objects) if (c, d) in self.connection)

    def class_label(self, d: int) -> str:
        return self.class_labels.get(d, f"R{d}")

    def __repr__(self) -> str:
        return f"ConnectedCategory({self.name or self.category.name}, classes={len(self.downset)})"


@dataclass(frozen=True)
class SupportMap:
    """Support map of a supported category: object -> the unique class connecting it."""

    assignment: Tuple[int, ...]

    def __getitem__(self, obj: int) -> int:
        return self.assignment[obj]

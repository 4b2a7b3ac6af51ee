"""Catalog domain entities."""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Optional, Tuple


@dataclass(frozen=True)
class PartitionLabel:
    """Partition of {1..n} labelling an R-class; blocks hold 0-based points."""

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        """Validate entity after initialization."""
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks if b))
        points = [x for b in blocks for x in b]
        if len(points) != len(set(points)):
            raise ValueError("Partition blocks must be disjoint")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def kernel(cls, images: Tuple[int, ...]) -> "PartitionLabel":
        """Kernel partition of a map given by its image list."""
        groups: Dict[int, list] = {}
        for x, y in enumerate(images):
            groups.setdefault(y, []).append(x)
        return cls(tuple(tuple(b) for b in groups.values()))

    def pairs(self) -> FrozenSet[Tuple[int, int]]:
        """The partition as an equivalence relation."""
        return frozenset((x, y) for b in self.blocks for x in b for y in b)

    def label(self) -> str:
        return "{" + ",".join("{" + ",".join(str(x + 1) for x in b) + "}" for b in self.blocks) + "}"


@dataclass(frozen=True)
class CatalogEntry:
    """Named catalog construction with the properties it is expected to have.

    ``kind`` is ``"semigroup"`` or ``"category"``. Semigroup entries carry
    class flags and Green's class counts; category entries carry the cone
    count, boundedness and support expectations.
    """

    name: str
    kind: str
    family: str
    n: Optional[int]
    builder: Callable[[], object] = field(compare=False, repr=False)
    expected_flags: Dict[str, bool] = field(default_factory=dict, compare=False)
    expected_counts: Dict[str, int] = field(default_factory=dict, compare=False)
    description: str = ""

    def build(self):
        return self.builder()

"""Finite semigroup domain entities."""

from dataclasses import dataclass, fields
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class FiniteSemigroup:
    """Finite semigroup given by its Cayley table.

    Elements are the indices ``0..size-1``; ``table[a, b]`` is the index of
    the product ``ab``. Associativity is checked by
    ``SemigroupService.from_cayley_table``, which is the intended way to
    build instances.
    """

    table: np.ndarray
    labels: Tuple[str, ...] = ()
    monoid_identity: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        """Validate entity after initialization."""
        table = np.array(self.table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise ValueError("Cayley table must be a non-empty square array")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(table.shape[0])))
        elif len(self.labels) != table.shape[0]:
            raise ValueError("One label per element is required")
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def size(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def product(self, *elements: int) -> int:
        """Left-to-right product of one or more elements."""
        result = elements[0]
        for x in elements[1:]:
            result = int(self.table[result, x])
        return result

    def label(self, a: int) -> str:
        return self.labels[a]

    def __repr__(self) -> str:
        name = self.name or "S"
        return f"FiniteSemigroup({name}, size={self.size})"


@dataclass(frozen=True, eq=False)
class GreensData:
    """Green's quasi-orders, classes and idempotents of a finite semigroup.

    Class maps send each element to a class index; classes are numbered
    in order of their least element, and the representative of a class
    is always its least element.
    """

    leq_l: np.ndarray
    leq_r: np.ndarray
    nat_leq: np.ndarray
    l_class: np.ndarray
    r_class: np.ndarray
    h_class: np.ndarray
    d_class: np.ndarray
    idempotents: Tuple[int, ...]

    @property
    def num_l(self) -> int:
        return int(self.l_class.max()) + 1

    @property
    def num_r(self) -> int:
        return int(self.r_class.max()) + 1

    @property
    def num_h(self) -> int:
        return int(self.h_class.max()) + 1

    @property
    def num_d(self) -> int:
        return int(self.d_class.max()) + 1

    def members(self, class_map: np.ndarray, index: int) -> List[int]:
        return [int(x) for x in np.flatnonzero(class_map == index)]

    def l_members(self, index: int) -> List[int]:
        return self.members(self.l_class, index)

    def r_members(self, index: int) -> List[int]:
        return self.members(self.r_class, index)

    def d_members(self, index: int) -> List[int]:
        return self.members(self.d_class, index)

    def is_idempotent(self, a: int) -> bool:
        return a in self._idempotent_set

    @cached_property
    def _idempotent_set(self) -> frozenset:
        return frozenset(self.idempotents)

    def idempotents_in(self, class_map: np.ndarray, index: int) -> List[int]:
        return [e for e in self.idempotents if class_map[e] == index]


@dataclass
class ClassFlags:
    """Membership of a semigroup in the classes the engine recognises."""

    regular: bool = False
    left_reductive: bool = False
    right_reductive: bool = False
    l_unipotent: bool = False
    r_unipotent: bool = False
    inverse: bool = False
    band: bool = False
    right_regular_band: bool = False
    left_regular_band: bool = False
    monoid: bool = False

    def as_dict(self) -> Dict[str, bool]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def inconsistencies(self) -> List[str]:
        """Implications between flags that fail to hold."""
        problems = []
        if self.inverse and not (self.l_unipotent and self.r_unipotent):
            problems.append("inverse without L- and R-unipotency")
        if self.right_regular_band and not (self.band and self.l_unipotent):
            problems.append("right regular band that is not an L-unipotent band")
        if self.left_regular_band and not (self.band and self.r_unipotent):
            problems.append("left regular band that is not an R-unipotent band")
        if self.l_unipotent and not (self.regular and self.left_reductive):
            problems.append("L-unipotent but not left reductive regular")
        if self.r_unipotent and not (self.regular and self.right_reductive):
            problems.append("R-unipotent but not right reductive regular")
        if self.monoid and not (self.left_reductive and self.right_reductive):
            problems.append("monoid that is not reductive on both sides")
        if self.band and not self.regular:
            problems.append("band that is not regular")
        return problems


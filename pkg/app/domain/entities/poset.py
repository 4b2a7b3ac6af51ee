"""Finite partially ordered sets."""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """Finite poset given by its order matrix.

    ``leq[a, b]`` is True when ``a <= b``.
    """

    leq: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        """Validate entity after initialization."""
        leq = np.array(self.leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise ValueError("Order matrix must be square")
        leq.setflags(write=False)
        object.__setattr__(self, "leq", leq)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(leq.shape[0])))
        elif len(self.labels) != leq.shape[0]:
            raise ValueError("One label per element is required")

    @property
    def size(self) -> int:
        return int(self.leq.shape[0])

    def is_partial_order(self) -> bool:
        m = self.leq
        if not m.diagonal().all():
            return False
        if (m & m.T & ~np.eye(self.size, dtype=bool)).any():
            return False
        # transitivity: (m @ m) must not add pairs
        closure = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        return not (closure & ~m).any()

    def lower_bounds(self, a: int, b: int) -> List[int]:
        return [int(x) for x in np.flatnonzero(self.leq[:, a] & self.leq[:, b])]

    def meet(self, a: int, b: int) -> Optional[int]:
        """Greatest lower bound of a and b, or None."""
        bounds = self.lower_bounds(a, b)
        for x in bounds:
            if all(self.leq[y, x] for y in bounds):
                return x
        return None

    def is_meet_semilattice(self) -> bool:
        return all(
            self.meet(a, b) is not None for a in range(self.size) for b in range(a + 1, self.size)
        )

    def maximal(self) -> List[int]:
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        return [int(a) for a in range(self.size) if not strict[a].any()]

    def minimal(self) -> List[int]:
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        return [int(a) for a in range(self.size) if not strict[:, a].any()]

    def largest(self) -> Optional[int]:
        tops = self.maximal()
        if len(tops) == 1 and self.leq[:, tops[0]].all():
            return tops[0]
        return None

    def down_set(self, a: int) -> List[int]:
        return [int(x) for x in np.flatnonzero(self.leq[:, a])]

    def is_down_closed(self, subset) -> Optional[Tuple[int, int]]:
        """Return (member, missing element below it) or None when closed."""
        members = set(subset)
        for a in sorted(members):
            for x in self.down_set(a):
                if x not in members:
                    return (a, x)
        return None

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Strict order as a DiGraph with edges a -> b for a < b."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.size))
        rows, cols = np.nonzero(self.leq & ~np.eye(self.size, dtype=bool))
        g.add_edges_from(zip(rows.tolist(), cols.tolist()))
        return g

    def hasse_edges(self) -> List[Tuple[int, int]]:
        """Covering pairs (a, b) with a < b, sorted."""
        reduced = nx.transitive_reduction(self.graph)
        return sorted(reduced.edges())

    def linear_extension(self, descending: bool = False) -> List[int]:
        """Topological order, ties broken by index."""
        order = list(nx.lexicographical_topological_sort(self.graph))
        return order[::-1] if descending else order

    def subposet(self, elements) -> "FinitePoset":
        idx = list(elements)
        return FinitePoset(self.leq[np.ix_(idx, idx)], tuple(self.labels[i] for i in idx))

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.leq.T.copy(), self.labels)

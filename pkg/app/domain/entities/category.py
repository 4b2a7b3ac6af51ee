"""Finite category domain entities."""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Hashable, List, Tuple

import numpy as np

from app.domain.entities.poset import FinitePoset


@dataclass(frozen=True)
class MorphismTriple:
    """Morphism r(e,u,f) of 𝕃(S) (side ``"r"``) or l(e,u,f) of ℝ(S) (side ``"l"``).

    ``e`` and ``f`` are the least idempotents of their L-classes (R-classes
    for side ``"l"``) and ``u`` is the canonical witness, so equality of
    triples is equality of morphisms.
    """

    e: int
    u: int
    f: int
    side: str = "r"

    def label(self, labels) -> str:
        return f"{self.side}({labels[self.e]},{labels[self.u]},{labels[self.f]})"


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """Finite category with subobjects, stored as dense tables.

    Composition is written left to right: ``compose[f, g]`` is "f then g"
    and is -1 unless ``cod[f] == dom[g]``. ``inclusion[a, b]`` is the
    morphism j(a, b) when a ⪯ b and -1 otherwise.
    """

    dom: np.ndarray
    cod: np.ndarray
    compose: np.ndarray
    identities: np.ndarray
    inclusion: np.ndarray
    object_labels: Tuple[str, ...] = ()
    morphism_labels: Tuple[str, ...] = ()
    object_data: Tuple[Any, ...] = ()
    morphism_data: Tuple[Any, ...] = ()
    name: str = ""

    def __post_init__(self):
        """Validate entity after initialization."""
        dom = np.array(self.dom, dtype=np.int64)
        cod = np.array(self.cod, dtype=np.int64)
        compose = np.array(self.compose, dtype=np.int64)
        identities = np.array(self.identities, dtype=np.int64)
        inclusion = np.array(self.inclusion, dtype=np.int64)
        m = dom.shape[0]
        o = identities.shape[0]
        if cod.shape != (m,) or compose.shape != (m, m):
            raise ValueError("Morphism tables have inconsistent shapes")
        if inclusion.shape != (o, o):
            raise ValueError("Inclusion table must be objects x objects")
        if o == 0:
            raise ValueError("A category needs at least one object")
        for name, arr in (
            ("dom", dom),
            ("cod", cod),
            ("compose", compose),
            ("identities", identities),
            ("inclusion", inclusion),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not self.object_labels:
            object.__setattr__(self, "object_labels", tuple(str(i) for i in range(o)))
        if not self.morphism_labels:
            object.__setattr__(self, "morphism_labels", tuple(f"m{i}" for i in range(m)))
        if len(self.object_labels) != o or len(self.morphism_labels) != m:
            raise ValueError("Label counts do not match the tables")
        if self.object_data and len(self.object_data) != o:
            raise ValueError("Object payload count does not match")
        if self.morphism_data and len(self.morphism_data) != m:
            raise ValueError("Morphism payload count does not match")

    @property
    def num_objects(self) -> int:
        return int(self.identities.shape[0])

    @property
    def num_morphisms(self) -> int:
        return int(self.dom.shape[0])

    @cached_property
    def leq(self) -> np.ndarray:
        """Subobject relation: ``leq[a, b]`` iff a ⪯ b."""
        m = self.inclusion >= 0
        m.setflags(write=False)
        return m

    @cached_property
    def poset(self) -> FinitePoset:
        return FinitePoset(self.leq, self.object_labels)

    @cached_property
    def _homs(self) -> Dict[Tuple[int, int], np.ndarray]:
        homs: Dict[Tuple[int, int], List[int]] = {}
        for f in range(self.num_morphisms):
            homs.setdefault((int(self.dom[f]), int(self.cod[f])), []).append(f)
        return {key: np.asarray(value, dtype=np.int64) for key, value in homs.items()}

    def hom(self, a: int, b: int) -> np.ndarray:
        """Morphism indices of 𝒞(a, b), ascending."""
        return self._homs.get((a, b), np.empty(0, dtype=np.int64))

    def hom_sizes(self) -> np.ndarray:
        sizes = np.zeros((self.num_objects, self.num_objects), dtype=np.int64)
        for (a, b), members in self._homs.items():
            sizes[a, b] = members.size
        return sizes

    def into(self, b: int) -> np.ndarray:
        """All morphisms with codomain b."""
        return np.flatnonzero(self.cod == b)

    def out_of(self, a: int) -> np.ndarray:
        """All morphisms with domain a."""
        return np.flatnonzero(self.dom == a)

    def comp(self, *morphisms: int) -> int:
        """Left-to-right composite of a composable chain."""
        result = morphisms[0]
        for g in morphisms[1:]:
            nxt = int(self.compose[result, g])
            if nxt < 0:
                raise ValueError(f"Morphisms {result} and {g} are not composable")
            result = nxt
        return result

    def identity(self, a: int) -> int:
        return int(self.identities[a])

    def j(self, a: int, b: int) -> int:
        """Inclusion j(a, b); raises when a is not below b."""
        value = int(self.inclusion[a, b])
        if value < 0:
            raise ValueError(f"No inclusion from object {a} to object {b}")
        return value

    def is_inclusion(self, f: int) -> bool:
        return int(self.inclusion[self.dom[f], self.cod[f]]) == f

    @cached_property
    def morphism_index(self) -> Dict[Hashable, int]:
        return {payload: i for i, payload in enumerate(self.morphism_data)}

    @cached_property
    def object_index(self) -> Dict[Hashable, int]:
        return {payload: i for i, payload in enumerate(self.object_data)}

    def __repr__(self) -> str:
        name = self.name or "C"
        return f"FiniteCategory({name}, objects={self.num_objects}, morphisms={self.num_morphisms})"


@dataclass(frozen=True)
class NormalFactorization:
    """f = q u j with q a retraction, u an isomorphism and j an inclusion.

    ``epi_component`` is the composite qu, which does not depend on the
    coimage chosen.
    """

    morphism: int
    retraction: int
    isomorphism: int
    inclusion: int
    coimage: int
    image: int
    epi_component: int


@dataclass(frozen=True, eq=False)
class LeftCategory:
    """𝕃(S) (side ``"r"``) or ℝ(S) (side ``"l"``) with its semigroup.

    ``canonical`` sends every idempotent to the least idempotent of its
    L-class (R-class for ℝ(S)); those are the object payloads.
    """

    semigroup: Any
    category: FiniteCategory
    canonical: Dict[int, int]
    side: str = "r"

    def object_of(self, e: int) -> int:
        """Object Se (eS for ℝ(S)) of an idempotent e."""
        return self.category.object_index[self.canonical[e]]

    def morphism(self, e: int, u: int, f: int) -> int:
        """Index of the morphism r(e,u,f) (l(e,u,f)) after canonicalization."""
        t = self.semigroup.table
        ce = self.canonical[e]
        cf = self.canonical[f]
        witness = int(t[ce, u]) if self.side == "r" else int(t[u, ce])
        return self.category.morphism_index[MorphismTriple(ce, witness, cf, self.side)]

    def triple(self, m: int) -> MorphismTriple:
        return self.category.morphism_data[m]

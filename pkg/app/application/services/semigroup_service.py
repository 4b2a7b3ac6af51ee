"""Semigroup service: construction, Green's structure and classification.

All operations are stateless and work on the dense Cayley table of a
``FiniteSemigroup``. Products are written left to right: ``ab`` is
``table[a, b]``.
"""

import logging
import weakref
from collections import deque
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import (
    CapExceeded,
    IndexOutOfRange,
    NonAssociative,
    NotRegular,
)
from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import ClassFlags, FiniteSemigroup, GreensData

logger = logging.getLogger(__name__)

_GREENS_CACHE: "weakref.WeakKeyDictionary[FiniteSemigroup, GreensData]" = weakref.WeakKeyDictionary()


def _class_map(equivalence: np.ndarray) -> np.ndarray:
    """Number the classes of an equivalence matrix by least member."""
    n = equivalence.shape[0]
    result = np.full(n, -1, dtype=np.int64)
    index = 0
    for a in range(n):
        if result[a] < 0:
            result[equivalence[a]] = index
            index += 1
    return result


class SemigroupService:
    """Service for finite semigroups."""

    @staticmethod
    def find_non_associative(table: np.ndarray) -> Optional[Tuple[int, int, int]]:
        """Return the first triple (a, b, c) with (ab)c != a(bc), or None.

        One row of the cube is compared per step: for fixed ``a`` the
        matrices ``T[T[a]]`` and ``T[a][T]`` hold (ab)c and a(bc).
        """
        t = np.asarray(table, dtype=np.int64)
        for a in range(t.shape[0]):
            lhs = t[t[a]]
            rhs = t[a][t]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                b, c = bad[0]
                return (a, int(b), int(c))
        return None

    @staticmethod
    def find_identity(table: np.ndarray) -> Optional[int]:
        t = np.asarray(table)
        ar = np.arange(t.shape[0])
        for e in range(t.shape[0]):
            if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
                return e
        return None

    @staticmethod
    def from_cayley_table(
        table,
        labels: Optional[Sequence[str]] = None,
        name: str = "",
        cap: Optional[int] = None,
    ) -> FiniteSemigroup:
        """Build a semigroup from a square table of element indices.

        Args:
            table: Square array-like, ``table[a][b]`` = index of ``ab``
            labels: Optional element names
            name: Optional semigroup name
            cap: Largest accepted order (default: settings.MAX_SEMIGROUP_SIZE)

        Returns:
            Validated FiniteSemigroup with its identity detected

        Raises:
            IndexOutOfRange: entry outside [0, n)
            NonAssociative: with the first violating triple
            CapExceeded: order above the cap
        """
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise ValueError("Cayley table must be a non-empty square array")
        n = t.shape[0]
        cap = settings.MAX_SEMIGROUP_SIZE if cap is None else cap
        if n > cap:
            raise CapExceeded("semigroup order", n, cap)
        bad = np.argwhere((t < 0) | (t >= n))
        if bad.size:
            a, b = bad[0]
            raise IndexOutOfRange(int(t[a, b]), n, where=f"row {a}, column {b}")
        triple = SemigroupService.find_non_associative(t)
        if triple is not None:
            raise NonAssociative(*triple)
        identity = SemigroupService.find_identity(t)
        return FiniteSemigroup(
            table=t,
            labels=tuple(labels) if labels else (),
            monoid_identity=identity,
            name=name,
        )

    @staticmethod
    def from_elements(
        elements: Sequence[Hashable],
        multiply: Callable[[Hashable, Hashable], Hashable],
        labels: Optional[Sequence[str]] = None,
        name: str = "",
        cap: Optional[int] = None,
    ) -> FiniteSemigroup:
        """Tabulate a closed set of concrete elements under ``multiply``."""
        cap = settings.MAX_SEMIGROUP_SIZE if cap is None else cap
        if len(elements) > cap:
            raise CapExceeded("semigroup order", len(elements), cap)
        index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                product = multiply(x, y)
                if product not in index:
                    raise ValueError(f"Element set is not closed: {x!r}{y!r} = {product!r}")
                table[i, j] = index[product]
        return SemigroupService.from_cayley_table(table, labels=labels, name=name, cap=cap)

    @staticmethod
    def closure(
        generators: Sequence[Hashable],
        multiply: Callable[[Hashable, Hashable], Hashable],
        cap: Optional[int] = None,
    ) -> List[Hashable]:
        """All products of generators, by breadth-first right multiplication."""
        cap = settings.MAX_SEMIGROUP_SIZE if cap is None else cap
        seen: Dict[Hashable, None] = {}
        queue = deque()
        for g in generators:
            if g not in seen:
                seen[g] = None
                queue.append(g)
        while queue:
            x = queue.popleft()
            for g in generators:
                y = multiply(x, g)
                if y not in seen:
                    seen[y] = None
                    if len(seen) > cap:
                        raise CapExceeded("semigroup order", len(seen), cap)
                    queue.append(y)
        return list(seen)

    @staticmethod
    def greens(S: FiniteSemigroup) -> GreensData:
        """Green's quasi-orders, classes, idempotents and natural order.

        ``leq_l[a, b]`` holds iff a is in S¹b; it is filled by one sweep
        marking every product xb below b. ``leq_r`` is the dual.
        """
        cached = _GREENS_CACHE.get(S)
        if cached is not None:
            return cached

        t = S.table
        n = S.size
        ar = np.arange(n)
        leq_l = np.eye(n, dtype=bool)
        leq_l[t, ar[None, :]] = True
        leq_r = np.eye(n, dtype=bool)
        leq_r[t, ar[:, None]] = True

        l_eq = leq_l & leq_l.T
        r_eq = leq_r & leq_r.T
        h_eq = l_eq & r_eq
        d_eq = (l_eq.astype(np.int64) @ r_eq.astype(np.int64)) > 0

        idempotents = np.flatnonzero(t[ar, ar] == ar)
        below_left = np.zeros((n, n), dtype=bool)
        below_right = np.zeros((n, n), dtype=bool)
        if idempotents.size:
            below_left[t[idempotents, :], ar[None, :]] = True
            below_right[t[:, idempotents], ar[:, None]] = True
        nat_leq = below_left & below_right

        for m in (leq_l, leq_r, nat_leq):
            m.setflags(write=False)
        data = GreensData(
            leq_l=leq_l,
            leq_r=leq_r,
            nat_leq=nat_leq,
            l_class=_class_map(l_eq),
            r_class=_class_map(r_eq),
            h_class=_class_map(h_eq),
            d_class=_class_map(d_eq),
            idempotents=tuple(int(e) for e in idempotents),
        )
        logger.debug(
            f"Green's data: {data.num_l} L-classes, {data.num_r} R-classes, {data.num_d} D-classes",
            extra={"semigroup_order": n},
        )
        _GREENS_CACHE[S] = data
        return data

    @staticmethod
    def idempotents(S: FiniteSemigroup) -> List[int]:
        return list(SemigroupService.greens(S).idempotents)

    @staticmethod
    def weak_inverses(S: FiniteSemigroup, a: int) -> List[int]:
        """Elements x with axa = a."""
        t = S.table
        return [int(x) for x in np.flatnonzero(t[t[a, :], a] == a)]

    @staticmethod
    def inverses(S: FiniteSemigroup, a: int) -> List[int]:
        """V(a): elements x with axa = a and xax = x."""
        t = S.table
        xs = np.asarray(SemigroupService.weak_inverses(S, a), dtype=np.int64)
        if xs.size == 0:
            return []
        keep = t[t[xs, a], xs] == xs
        return [int(x) for x in xs[keep]]

    @staticmethod
    def non_regular_element(S: FiniteSemigroup) -> Optional[int]:
        t = S.table
        ar = np.arange(S.size)
        axa = t[t[ar[:, None], ar[None, :]], ar[:, None]]
        has_inverse = (axa == ar[:, None]).any(axis=1)
        missing = np.flatnonzero(~has_inverse)
        return int(missing[0]) if missing.size else None

    @staticmethod
    def is_regular(S: FiniteSemigroup) -> bool:
        return SemigroupService.non_regular_element(S) is None

    @staticmethod
    def require_regular(S: FiniteSemigroup) -> None:
        a = SemigroupService.non_regular_element(S)
        if a is not None:
            raise NotRegular(a)

    @staticmethod
    def _duplicate_pair(rows: np.ndarray) -> Optional[Tuple[int, int]]:
        first: Dict[bytes, int] = {}
        for i, row in enumerate(rows):
            key = row.tobytes()
            if key in first:
                return (first[key], i)
            first[key] = i
        return None

    @staticmethod
    def left_reductive_witness(S: FiniteSemigroup) -> Optional[Tuple[int, int]]:
        """Pair a != b with x·a = x·b for all x (equal columns), or None."""
        return SemigroupService._duplicate_pair(np.ascontiguousarray(S.table.T))

    @staticmethod
    def right_reductive_witness(S: FiniteSemigroup) -> Optional[Tuple[int, int]]:
        """Pair a != b with a·x = b·x for all x (equal rows), or None."""
        return SemigroupService._duplicate_pair(np.ascontiguousarray(S.table))

    @staticmethod
    def is_left_reductive(S: FiniteSemigroup) -> bool:
        return SemigroupService.left_reductive_witness(S) is None

    @staticmethod
    def is_right_reductive(S: FiniteSemigroup) -> bool:
        return SemigroupService.right_reductive_witness(S) is None

    @staticmethod
    def is_band(S: FiniteSemigroup) -> bool:
        ar = np.arange(S.size)
        return bool(np.array_equal(S.table[ar, ar], ar))

    @staticmethod
    def is_right_regular_band(S: FiniteSemigroup) -> bool:
        """Band with xyx = yx."""
        t = S.table
        ar = np.arange(S.size)
        return SemigroupService.is_band(S) and bool(np.array_equal(t[t, ar[:, None]], t.T))

    @staticmethod
    def is_left_regular_band(S: FiniteSemigroup) -> bool:
        """Band with xyx = xy."""
        t = S.table
        ar = np.arange(S.size)
        return SemigroupService.is_band(S) and bool(np.array_equal(t[t, ar[:, None]], t))

    @staticmethod
    def _unique_idempotent_per_class(S: FiniteSemigroup, class_map: np.ndarray) -> bool:
        g = SemigroupService.greens(S)
        counts = np.bincount(class_map[list(g.idempotents)], minlength=int(class_map.max()) + 1)
        return bool((counts == 1).all())

    @staticmethod
    def is_l_unipotent(S: FiniteSemigroup) -> bool:
        if not SemigroupService.is_regular(S):
            return False
        return SemigroupService._unique_idempotent_per_class(S, SemigroupService.greens(S).l_class)

    @staticmethod
    def is_r_unipotent(S: FiniteSemigroup) -> bool:
        if not SemigroupService.is_regular(S):
            return False
        return SemigroupService._unique_idempotent_per_class(S, SemigroupService.greens(S).r_class)

    @staticmethod
    def idempotents_commute(S: FiniteSemigroup) -> bool:
        t = S.table
        e = np.asarray(SemigroupService.idempotents(S), dtype=np.int64)
        block = t[np.ix_(e, e)]
        return bool(np.array_equal(block, block.T))

    @staticmethod
    def is_inverse(S: FiniteSemigroup) -> bool:
        return SemigroupService.is_regular(S) and SemigroupService.idempotents_commute(S)

    @staticmethod
    def l_unipotent_ladder(S: FiniteSemigroup) -> Dict[str, bool]:
        """Seven independently evaluated characterisations of L-unipotency.

        Meaningful for regular semigroups, where they are equivalent:

        1. every L-class holds exactly one idempotent
        2. eS ∩ fS = efS = feS for idempotents e, f
        3. efe = fe for idempotents e, f
        4. a'a = a''a for all inverses a', a'' of a
        5. the idempotent of L_a is a'a for every inverse a'
        6. a'ea = a''ea for inverses a', a'' and idempotent e
        7. aa'ea = ea for every inverse a' and idempotent e
        """
        SemigroupService.require_regular(S)
        t = S.table
        g = SemigroupService.greens(S)
        E = np.asarray(g.idempotents, dtype=np.int64)
        V = [np.asarray(SemigroupService.inverses(S, a), dtype=np.int64) for a in range(S.size)]

        unique_in_l = SemigroupService._unique_idempotent_per_class(S, g.l_class)

        ideals_ok = True
        right_ideals = [frozenset(t[e].tolist()) for e in range(S.size)]
        for e in E:
            for f in E:
                meet = right_ideals[e] & right_ideals[f]
                if meet != right_ideals[t[e, f]] or meet != right_ideals[t[f, e]]:
                    ideals_ok = False
                    break
            if not ideals_ok:
                break

        efe = t[t[np.ix_(E, E)], E[:, None]]
        fe = t[np.ix_(E, E)].T
        rrb_ok = bool(np.array_equal(efe, fe))

        left_units_agree = all(np.unique(t[V[a], a]).size == 1 for a in range(S.size))

        idempotent_is_left_unit = True
        for a in range(S.size):
            in_class = g.idempotents_in(g.l_class, int(g.l_class[a]))
            if len(in_class) != 1 or np.any(t[V[a], a] != in_class[0]):
                idempotent_is_left_unit = False
                break

        conjugates_agree = True
        absorbs = True
        for a in range(S.size):
            # rows: inverse a', columns: idempotent e; entry a'ea
            conj = t[t[np.ix_(V[a], E)], a]
            if (conj != conj[:1]).any():
                conjugates_agree = False
            # aa'ea
            lhs = t[t[a, V[a]][:, None], t[E, a][None, :]]
            if (lhs != t[E, a][None, :]).any():
                absorbs = False
            if not conjugates_agree and not absorbs:
                break

        return {
            "unique_idempotent_per_l_class": unique_in_l,
            "idempotent_right_ideal_meets": ideals_ok,
            "idempotents_right_regular": rrb_ok,
            "inverse_left_units_agree": left_units_agree,
            "l_class_idempotent_is_left_unit": idempotent_is_left_unit,
            "idempotent_conjugates_agree": conjugates_agree,
            "left_unit_absorbs_idempotents": absorbs,
        }

    @staticmethod
    def inverse_ladder(S: FiniteSemigroup) -> Dict[str, bool]:
        """Four independently evaluated characterisations of inverse semigroups.

        For regular semigroups these are equivalent: commuting idempotents,
        unique inverses, idempotents forming a semilattice under the natural
        order, and one idempotent per L-class and per R-class.
        """
        SemigroupService.require_regular(S)
        g = SemigroupService.greens(S)
        E = list(g.idempotents)
        e_poset = FinitePoset(g.nat_leq[np.ix_(E, E)])
        return {
            "idempotents_commute": SemigroupService.idempotents_commute(S),
            "unique_inverses": all(len(SemigroupService.inverses(S, a)) == 1 for a in range(S.size)),
            "idempotent_semilattice": e_poset.is_meet_semilattice(),
            "unique_idempotent_per_l_and_r_class": (
                SemigroupService._unique_idempotent_per_class(S, g.l_class)
                and SemigroupService._unique_idempotent_per_class(S, g.r_class)
            ),
        }

    @staticmethod
    def classify(S: FiniteSemigroup) -> ClassFlags:
        """Compute every class-membership flag of S."""
        regular = SemigroupService.is_regular(S)
        band = SemigroupService.is_band(S)
        flags = ClassFlags(
            regular=regular,
            left_reductive=SemigroupService.is_left_reductive(S),
            right_reductive=SemigroupService.is_right_reductive(S),
            l_unipotent=SemigroupService.is_l_unipotent(S),
            r_unipotent=SemigroupService.is_r_unipotent(S),
            inverse=SemigroupService.is_inverse(S),
            band=band,
            right_regular_band=band and SemigroupService.is_right_regular_band(S),
            left_regular_band=band and SemigroupService.is_left_regular_band(S),
            monoid=S.monoid_identity is not None,
        )
        problems = flags.inconsistencies()
        if problems:
            logger.error(f"Inconsistent class flags for {S!r}: {problems}", extra={"check": "classify"})
        return flags

    @staticmethod
    def quotient_poset_R(S: FiniteSemigroup) -> FinitePoset:
        """Poset of R-classes ordered by R_a ⊑ R_b iff aS¹ ⊆ bS¹."""
        SemigroupService.require_regular(S)
        g = SemigroupService.greens(S)
        reps = [g.r_members(i)[0] for i in range(g.num_r)]
        labels = tuple("{" + ",".join(S.labels[x] for x in g.r_members(i)) + "}" for i in range(g.num_r))
        return FinitePoset(g.leq_r[np.ix_(reps, reps)], labels)

    @staticmethod
    def quotient_poset_L(S: FiniteSemigroup) -> FinitePoset:
        """Poset of L-classes ordered by S¹a ⊆ S¹b."""
        SemigroupService.require_regular(S)
        g = SemigroupService.greens(S)
        reps = [g.l_members(i)[0] for i in range(g.num_l)]
        labels = tuple("{" + ",".join(S.labels[x] for x in g.l_members(i)) + "}" for i in range(g.num_l))
        return FinitePoset(g.leq_l[np.ix_(reps, reps)], labels)

    @staticmethod
    def r_meet_mismatches(S: FiniteSemigroup) -> List[Tuple[int, int]]:
        """Idempotent pairs (e, f) for which R_e ∧ R_f is not R_ef."""
        g = SemigroupService.greens(S)
        poset = SemigroupService.quotient_poset_R(S)
        bad = []
        for e in g.idempotents:
            for f in g.idempotents:
                meet = poset.meet(int(g.r_class[e]), int(g.r_class[f]))
                if meet != int(g.r_class[S.mul(e, f)]):
                    bad.append((e, f))
        return bad

    @staticmethod
    def opposite(S: FiniteSemigroup) -> FiniteSemigroup:
        """S^op with a∘b = ba."""
        return FiniteSemigroup(
            table=S.table.T.copy(),
            labels=S.labels,
            monoid_identity=S.monoid_identity,
            name=f"{S.name or 'S'}^op",
        )

    @staticmethod
    def subsemigroup(S: FiniteSemigroup, elements: Sequence[int], name: str = "") -> Tuple[FiniteSemigroup, List[int]]:
        """Restrict S to a closed subset; returns the subsemigroup and its embedding."""
        members = sorted(set(int(x) for x in elements))
        position = {x: i for i, x in enumerate(members)}
        block = S.table[np.ix_(members, members)]
        table = np.empty_like(block)
        for (i, j), value in np.ndenumerate(block):
            if int(value) not in position:
                raise ValueError(f"Subset is not closed: {members[i]}·{members[j]} = {value}")
            table[i, j] = position[int(value)]
        sub = SemigroupService.from_cayley_table(
            table, labels=[S.labels[x] for x in members], name=name or f"sub({S.name})"
        )
        return sub, members

    @staticmethod
    def direct_product(S: FiniteSemigroup, T: FiniteSemigroup, name: str = "") -> FiniteSemigroup:
        n, m = S.size, T.size
        table = (S.table[:, None, :, None] * m + T.table[None, :, None, :]).reshape(n * m, n * m)
        labels = [f"({s},{t})" for s in S.labels for t in T.labels]
        return SemigroupService.from_cayley_table(table, labels=labels, name=name or f"{S.name}x{T.name}")

    @staticmethod
    def adjoin(S: FiniteSemigroup, kind: str, label: str, name: str = "") -> FiniteSemigroup:
        """Adjoin a new zero (``kind='zero'``) or identity (``kind='identity'``)."""
        n = S.size
        table = np.empty((n + 1, n + 1), dtype=np.int64)
        table[:n, :n] = S.table
        if kind == "zero":
            table[n, :] = n
            table[:, n] = n
        elif kind == "identity":
            table[n, :] = np.arange(n + 1)
            table[:, n] = np.arange(n + 1)
        else:
            raise ValueError(f"Unknown adjoined element kind: {kind}")
        return SemigroupService.from_cayley_table(table, labels=list(S.labels) + [label], name=name)

    @staticmethod
    def homomorphism_witness(S: FiniteSemigroup, T: FiniteSemigroup, phi: Sequence[int]) -> Optional[Tuple[int, int]]:
        """First pair (a, b) with (ab)φ != aφ·bφ, or None."""
        p = np.asarray(phi, dtype=np.int64)
        if p.shape != (S.size,):
            raise ValueError("Map must send every element")
        if ((p < 0) | (p >= T.size)).any():
            raise IndexOutOfRange(int(p[(p < 0) | (p >= T.size)][0]), T.size, where="homomorphism")
        bad = np.argwhere(p[S.table] != T.table[p[:, None], p[None, :]])
        if bad.size:
            return (int(bad[0][0]), int(bad[0][1]))
        return None

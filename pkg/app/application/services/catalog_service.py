"""Catalog service: transformation semigroups, powerset-style categories and named examples.

Maps on {0..n-1} are tuples of images, composed left to right; a
partial map marks undefined points with -1. Labels print points 1-based,
so the identity of T3 is ``[1 2 3]`` and the empty map of I2 is ``[- -]``.
"""

import itertools
import logging
import re
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.application.dto.check_dto import CheckReport
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.connected_service import ConnectedService
from app.application.services.functor_service import FunctorService
from app.application.services.semigroup_service import SemigroupService
from app.core.config import settings
from app.core.exceptions import CapExceeded, IndexOutOfRange, IsoFailure, UnknownCatalogEntry
from app.domain.entities.catalog import CatalogEntry, PartitionLabel
from app.domain.entities.category import FiniteCategory
from app.domain.entities.cone import Cone
from app.domain.entities.connected import ConnectedCategory
from app.domain.entities.morphisms import CategoryIso, CCMorphism, SemigroupIso
from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import ClassFlags, FiniteSemigroup

logger = logging.getLogger(__name__)

Map = Tuple[int, ...]
Built = Union[FiniteSemigroup, ConnectedCategory]

_FLAG_NAMES = tuple(ClassFlags().as_dict())
_NAME_PATTERN = re.compile(r"^(ST|SP|T|I|P|X)(?::)?(\d+)$")


def _flags(*true_names: str) -> Dict[str, bool]:
    unknown = set(true_names) - set(_FLAG_NAMES)
    if unknown:
        raise ValueError(f"Unknown flags: {sorted(unknown)}")
    return {name: name in true_names for name in _FLAG_NAMES}


ALL_FLAGS = _flags(*_FLAG_NAMES)
FULL_TRANSFORMATION_FLAGS = _flags("regular", "left_reductive", "right_reductive", "monoid")
SINGULAR_FLAGS = _flags("regular", "left_reductive", "right_reductive")
INVERSE_MONOID_FLAGS = _flags(
    "regular", "left_reductive", "right_reductive", "l_unipotent", "r_unipotent", "inverse", "monoid"
)
LEFT_ZERO_FLAGS = _flags("regular", "right_reductive", "r_unipotent", "band", "left_regular_band")
RIGHT_ZERO_FLAGS = _flags("regular", "left_reductive", "l_unipotent", "band", "right_regular_band")


def _transformation_flags(n: int) -> Dict[str, bool]:
    """T_2 is L-unipotent: each image class holds a single idempotent."""
    flags = dict(FULL_TRANSFORMATION_FLAGS)
    flags["l_unipotent"] = n == 2
    return flags


def _map_label(images: Sequence[int]) -> str:
    return "[" + " ".join("-" if y < 0 else str(y + 1) for y in images) + "]"


def _set_label(points: Sequence[int]) -> str:
    return "{" + ",".join(str(x + 1) for x in points) + "}"


def _compose_maps(x: Map, y: Map) -> Map:
    """x then y; undefined points stay undefined."""
    return tuple(-1 if v < 0 else y[v] for v in x)


def bell(n: int) -> int:
    """Number of partitions of an n-element set."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def set_partitions(n: int) -> List[PartitionLabel]:
    """All partitions of {0..n-1}."""
    results: List[List[List[int]]] = [[]]
    for x in range(n):
        grown = []
        for blocks in results:
            for i in range(len(blocks)):
                grown.append([b + [x] if j == i else list(b) for j, b in enumerate(blocks)])
            grown.append([list(b) for b in blocks] + [[x]])
        results = grown
    return sorted({PartitionLabel(tuple(tuple(b) for b in blocks)) for blocks in results}, key=lambda p: p.blocks)


def _check_degree(n: int, cap: int, what: str, least: int = 1) -> None:
    if n < least:
        raise IndexOutOfRange(n, cap + 1, where=f"{what} (least {least})")
    if n > cap:
        raise CapExceeded(what, n, cap)


class CatalogService:
    """Service for catalog constructions and their expectations."""

    # ------------------------------------------------------------------
    # transformation semigroups

    @staticmethod
    def transformations(n: int) -> List[Map]:
        return list(itertools.product(range(n), repeat=n))

    @staticmethod
    def singular_transformations(n: int) -> List[Map]:
        return [x for x in CatalogService.transformations(n) if len(set(x)) < n]

    @staticmethod
    def partial_injections(n: int) -> List[Map]:
        result = []
        for x in itertools.product(range(-1, n), repeat=n):
            defined = [v for v in x if v >= 0]
            if len(defined) == len(set(defined)):
                result.append(x)
        return result

    @staticmethod
    def _map_semigroup(elements: List[Map], name: str) -> FiniteSemigroup:
        return SemigroupService.from_elements(
            elements, _compose_maps, labels=[_map_label(x) for x in elements], name=name
        )

    @staticmethod
    def transformation_monoid(n: int, cap: Optional[int] = None) -> FiniteSemigroup:
        """T_n: all maps {1..n} -> {1..n}.

        Raises:
            CapExceeded: n above settings.MAX_CATALOG_SEMIGROUP_N
        """
        _check_degree(n, settings.MAX_CATALOG_SEMIGROUP_N if cap is None else cap, "T_n degree")
        return CatalogService._map_semigroup(CatalogService.transformations(n), f"T{n}")

    @staticmethod
    def singular_part(n: int, cap: Optional[int] = None) -> FiniteSemigroup:
        """T_n without its permutations (n >= 2)."""
        _check_degree(n, settings.MAX_CATALOG_SEMIGROUP_N if cap is None else cap, "ST_n degree", least=2)
        return CatalogService._map_semigroup(CatalogService.singular_transformations(n), f"ST{n}")

    @staticmethod
    def symmetric_inverse_monoid(n: int, cap: Optional[int] = None) -> FiniteSemigroup:
        """I_n: partial injections of {1..n}."""
        _check_degree(n, settings.MAX_CATALOG_SEMIGROUP_N if cap is None else cap, "I_n degree")
        return CatalogService._map_semigroup(CatalogService.partial_injections(n), f"I{n}")

    @staticmethod
    def image_kernel_check(S: FiniteSemigroup, maps: Sequence[Map]) -> CheckReport:
        """Green's quasi-orders of a map semigroup against images and kernels (domains for partial maps).

        S¹a ⊆ S¹b iff im a ⊆ im b; aS¹ ⊆ bS¹ iff ker b ⊆ ker a, which for
        partial injections reads dom a ⊆ dom b.
        """
        g = SemigroupService.greens(S)
        n = S.size
        partial = any(v < 0 for x in maps for v in x)
        images = [frozenset(v for v in x if v >= 0) for x in maps]
        if partial:
            keys = [frozenset(i for i, v in enumerate(x) if v >= 0) for x in maps]
            right = lambda a, b: keys[a] <= keys[b]
        else:
            keys = [PartitionLabel.kernel(x).pairs() for x in maps]
            right = lambda a, b: keys[b] <= keys[a]
        report = CheckReport(subject=f"{S.name} images and kernels")
        bad_l = next(
            ((a, b) for a in range(n) for b in range(n) if (images[a] <= images[b]) != bool(g.leq_l[a, b])), None
        )
        report.add("left_order_is_image_inclusion", bad_l is None, bad_l)
        bad_r = next(((a, b) for a in range(n) for b in range(n) if right(a, b) != bool(g.leq_r[a, b])), None)
        report.add("right_order_is_kernel_inclusion", bad_r is None, bad_r)
        return report

    # ------------------------------------------------------------------
    # powerset-style categories

    @staticmethod
    def subset_category(n: int, include_empty: bool, proper: bool, partial: bool, name: str) -> FiniteCategory:
        """Subsets of {0..n-1} with total maps (partial injections when ``partial``) as morphisms."""
        lo = 0 if include_empty else 1
        hi = n - 1 if proper else n
        objects = [A for k in range(lo, hi + 1) for A in itertools.combinations(range(n), k)]

        def hom(A, B):
            if partial:
                choices = itertools.product((-1,) + B, repeat=len(A))
                return [
                    (A, B, images)
                    for images in choices
                    if len([v for v in images if v >= 0]) == len({v for v in images if v >= 0})
                ]
            return [(A, B, images) for images in itertools.product(B, repeat=len(A))]

        def compose(f, g):
            A, B, fi = f
            _, C, gi = g
            position = {b: i for i, b in enumerate(B)}
            return (A, C, tuple(-1 if x < 0 else gi[position[x]] for x in fi))

        def inclusion(A, B):
            return (A, B, A) if set(A) <= set(B) else None

        return CategoryService.build_concrete(
            objects=objects,
            hom=hom,
            compose=compose,
            identity=lambda A: (A, A, A),
            inclusion=inclusion,
            object_label=_set_label,
            morphism_label=lambda m: f"{_set_label(m[0])}->{_set_label(m[1])}{_map_label(m[2])}",
            name=name,
        )

    @staticmethod
    def powerset_base(n: int, include_empty: bool = False) -> FiniteCategory:
        """𝕡 as a category with subobjects; with ∅ it fails normality."""
        _check_degree(n, settings.MAX_CATALOG_CATEGORY_N, "P_n degree")
        name = f"P{n}" + ("+empty" if include_empty else "")
        return CatalogService.subset_category(n, include_empty, proper=False, partial=False, name=name)

    @staticmethod
    def point_function(C: FiniteCategory, cone: Cone, n: int) -> Map:
        """x ↦ γ({x})(x) for a cone of 𝕡 or 𝕊𝕡."""
        images = []
        for x in range(n):
            component = C.morphism_data[cone[C.object_index[(x,)]]]
            images.append(component[2][0])
        return tuple(images)

    @staticmethod
    def _partition_connected(C: FiniteCategory, n: int) -> ConnectedCategory:
        hat = ConeService.enumerate_cones(C)
        g = SemigroupService.greens(hat.semigroup)
        labels = {
            d: PartitionLabel.kernel(CatalogService.point_function(C, hat.cones[g.r_members(d)[0]], n)).label()
            for d in range(g.num_r)
        }
        return ConnectedService.check_connected(C, hat, range(g.num_r), class_labels=labels, name=f"{C.name}_Pi")

    @staticmethod
    def powerset_category(n: int) -> ConnectedCategory:
        """𝕡 connected by all of Ĉ/ℛ, classes labelled by partitions."""
        return CatalogService._partition_connected(CatalogService.powerset_base(n), n)

    @staticmethod
    def singular_powerset(n: int) -> ConnectedCategory:
        """𝕊𝕡: the full subcategory of 𝕡 on proper nonempty subsets (n >= 2)."""
        _check_degree(n, settings.MAX_CATALOG_CATEGORY_N, "SP_n degree", least=2)
        C = CatalogService.subset_category(n, False, proper=True, partial=False, name=f"SP{n}")
        return CatalogService._partition_connected(C, n)

    @staticmethod
    def partial_bijection_category(n: int) -> ConnectedCategory:
        """𝕏: all subsets (∅ included) with partial injections A -> B as morphisms."""
        _check_degree(n, settings.MAX_CATALOG_CATEGORY_N, "X_n degree")
        C = CatalogService.subset_category(n, True, proper=False, partial=True, name=f"X{n}")
        return ConnectedService.connect_fully(C, name=f"X{n}")

    @staticmethod
    def partition_labels(cc: ConnectedCategory, n: int) -> Dict[int, PartitionLabel]:
        C = cc.category
        g = SemigroupService.greens(cc.full.semigroup)
        return {
            d: PartitionLabel.kernel(CatalogService.point_function(C, cc.full.cones[g.r_members(d)[0]], n))
            for d in cc.downset
        }

    @staticmethod
    def partition_poset(n: int, singular: bool = False) -> FinitePoset:
        """Partitions of {1..n} ordered by reverse inclusion of their relations."""
        parts = [p for p in set_partitions(n) if not singular or len(p.blocks) < n]
        pairs = [p.pairs() for p in parts]
        leq = np.array([[pairs[i] >= pairs[j] for j in range(len(parts))] for i in range(len(parts))], dtype=bool)
        return FinitePoset(leq, tuple(p.label() for p in parts))

    @staticmethod
    def partition_check(cc: ConnectedCategory, n: int) -> CheckReport:
        """R-classes of Ĉ(𝕡) (or Ĉ(𝕊𝕡)) against partitions ordered by ⊇."""
        labels = CatalogService.partition_labels(cc, n)
        singular = cc.category.num_objects < 2**n - 1
        report = CheckReport(subject=f"{cc.name} partitions")
        report.add("labels_distinct", len(set(labels.values())) == len(labels))
        expected = bell(n) - (1 if singular else 0)
        report.add("one_class_per_partition", len(labels) == expected, f"{len(labels)} != {expected}")

        g = SemigroupService.greens(cc.full.semigroup)
        bad_label = None
        for i in range(cc.full.size):
            kernel = PartitionLabel.kernel(CatalogService.point_function(cc.category, cc.full.cones[i], n))
            if kernel != labels[int(g.r_class[i])]:
                bad_label = i
                break
        report.add("class_label_is_kernel_of_every_member", bad_label is None, bad_label)

        poset = ConnectedService.r_class_poset(cc.full)
        bad_order = next(
            (
                (d1, d2)
                for d1 in labels
                for d2 in labels
                if bool(poset.leq[d1, d2]) != (labels[d1].pairs() >= labels[d2].pairs())
            ),
            None,
        )
        report.add("class_order_is_reverse_refinement", bad_order is None, bad_order)
        return report

    @staticmethod
    def _cone_iso(
        cc: ConnectedCategory, target: FiniteSemigroup, elements: Sequence[Map], evaluate: Callable[[Cone], Map]
    ) -> SemigroupIso:
        sub = ConnectedService.connection_semigroup(cc)
        index = {x: i for i, x in enumerate(elements)}
        mapping = []
        for i, cone in enumerate(sub.cones):
            image = evaluate(cone)
            if image not in index:
                raise IsoFailure("cone evaluates outside the target semigroup", i)
            mapping.append(index[image])
        if sub.size != target.size or len(set(mapping)) != target.size:
            raise IsoFailure("cone evaluation is not a bijection", (sub.size, target.size))
        witness = SemigroupService.homomorphism_witness(sub.semigroup, target, mapping)
        if witness is not None:
            raise IsoFailure("cone evaluation is not multiplicative", witness)
        return SemigroupIso(sub.semigroup, target, tuple(mapping))

    @staticmethod
    def phi_isomorphism(n: int) -> SemigroupIso:
        """Ĉ(𝕡) -> T_n, γ ↦ the map x ↦ γ({x})(x)."""
        cc = CatalogService.powerset_category(n)
        return CatalogService._cone_iso(
            cc,
            CatalogService.transformation_monoid(n),
            CatalogService.transformations(n),
            lambda cone: CatalogService.point_function(cc.category, cone, n),
        )

    @staticmethod
    def singular_phi_isomorphism(n: int) -> SemigroupIso:
        """Ĉ(𝕊𝕡) -> T_n without permutations."""
        cc = CatalogService.singular_powerset(n)
        return CatalogService._cone_iso(
            cc,
            CatalogService.singular_part(n),
            CatalogService.singular_transformations(n),
            lambda cone: CatalogService.point_function(cc.category, cone, n),
        )

    @staticmethod
    def partial_phi_isomorphism(n: int) -> SemigroupIso:
        """Ĉ(𝕏) -> I_n, γ ↦ γ(X)."""
        cc = CatalogService.partial_bijection_category(n)
        full = cc.category.object_index[tuple(range(n))]
        return CatalogService._cone_iso(
            cc,
            CatalogService.symmetric_inverse_monoid(n),
            CatalogService.partial_injections(n),
            lambda cone: cc.category.morphism_data[cone[full]][2],
        )

    @staticmethod
    def concrete_isomorphism(family: str, n: int) -> CCMorphism:
        """𝕃(S) -> 𝕡, 𝕊𝕡 or 𝕏: Se ↦ im e and r(e,u,f) ↦ u restricted to im e.

        ``family`` is ``"T"``, ``"ST"`` or ``"I"``.
        """
        builders = {
            "T": (CatalogService.transformation_monoid, CatalogService.transformations, CatalogService.powerset_category),
            "ST": (CatalogService.singular_part, CatalogService.singular_transformations, CatalogService.singular_powerset),
            "I": (
                CatalogService.symmetric_inverse_monoid,
                CatalogService.partial_injections,
                CatalogService.partial_bijection_category,
            ),
        }
        if family not in builders:
            raise UnknownCatalogEntry(family)
        build_semigroup, build_maps, build_target = builders[family]
        S = build_semigroup(n)
        maps = build_maps(n)
        source = FunctorService.functor_C(S)
        target = build_target(n)
        L = source.source
        D = target.category

        def image(e: int) -> Map:
            return tuple(sorted({v for v in maps[e] if v >= 0}))

        object_map = tuple(D.object_index[image(e)] for e in L.category.object_data)
        morphism_map = []
        for tr in L.category.morphism_data:
            A, B = image(tr.e), image(tr.f)
            morphism_map.append(D.morphism_index[(A, B, tuple(maps[tr.u][a] for a in A))])
        iso = CategoryIso(L.category, D, object_map, tuple(morphism_map))
        return FunctorService.from_category_iso(source, target, iso)

    # ------------------------------------------------------------------
    # named examples

    @staticmethod
    def named_semigroups() -> Dict[str, FiniteSemigroup]:
        """Small named semigroups: zero-sided bands, ℤ₂, the semilattice and their extensions."""
        build = SemigroupService.from_cayley_table
        L2 = build([[0, 0], [1, 1]], labels=["e", "f"], name="L2")
        R2 = build([[0, 1], [0, 1]], labels=["e", "f"], name="R2")
        SL2 = build([[0, 1], [1, 1]], labels=["1", "0"], name="SL2")
        return {
            "L2": L2,
            "R2": R2,
            "Z2": build([[0, 1], [1, 0]], labels=["1", "g"], name="Z2"),
            "SL2": SL2,
            "L2Z": SemigroupService.adjoin(L2, "zero", "0", name="L2Z"),
            "RRB3": SemigroupService.adjoin(R2, "identity", "1", name="RRB3"),
            "B4": SemigroupService.direct_product(R2, SL2, name="B4"),
        }

    @staticmethod
    def band_projection() -> Tuple[FiniteSemigroup, FiniteSemigroup, Tuple[int, ...]]:
        """B4 = R2 x SL2 onto SL2 by the second coordinate."""
        named = CatalogService.named_semigroups()
        return named["B4"], named["SL2"], (0, 1, 0, 1)

    @staticmethod
    def right_regular_bands(order: int) -> List[FiniteSemigroup]:
        """Right regular bands (xx = x, xyx = yx) of the given order, one per isomorphism class."""
        _check_degree(order, 4, "right regular band order")
        k = order
        ar = np.arange(k)
        table = np.full((k, k), -1, dtype=np.int64)
        table[ar, ar] = ar
        cells = [(a, b) for a in range(k) for b in range(k) if a != b]
        found: List[np.ndarray] = []
        seen = set()
        perms = list(itertools.permutations(range(k)))

        def consistent(t: np.ndarray) -> bool:
            d = t >= 0
            safe = np.where(d, t, 0)
            left = safe[safe, :]
            left_def = d[:, :, None] & d[safe]
            right = safe[ar[:, None, None], safe[None, :, :]]
            right_def = d[None, :, :] & d[ar[:, None, None], safe[None, :, :]]
            if (left_def & right_def & (left != right)).any():
                return False
            xyx = left[ar[:, None], ar[None, :], ar[:, None]]
            xyx_def = left_def[ar[:, None], ar[None, :], ar[:, None]] & d.T
            return not (xyx_def & (xyx != t.T)).any()

        def canonical(t: np.ndarray) -> bytes:
            best = None
            for p in perms:
                q = np.asarray(p)
                relabelled = np.empty_like(t)
                relabelled[np.ix_(q, q)] = q[t]
                key = relabelled.tobytes()
                if best is None or key < best:
                    best = key
            return best

        def search(depth: int) -> None:
            if depth == len(cells):
                key = canonical(table)
                if key not in seen:
                    seen.add(key)
                    found.append(table.copy())
                return
            a, b = cells[depth]
            for v in range(k):
                table[a, b] = v
                if consistent(table):
                    search(depth + 1)
            table[a, b] = -1

        search(0)
        letters = "abcd"
        return [
            SemigroupService.from_cayley_table(t, labels=list(letters[:k]), name=f"RRB{k}.{i + 1}")
            for i, t in enumerate(found)
        ]

    # ------------------------------------------------------------------
    # registry

    @staticmethod
    def _family_entry(family: str, n: int) -> CatalogEntry:
        if family == "T":
            return CatalogEntry(
                name=f"T{n}",
                kind="semigroup",
                family="T",
                n=n,
                builder=lambda: CatalogService.transformation_monoid(n),
                expected_flags=ALL_FLAGS if n == 1 else _transformation_flags(n),
                expected_counts={"order": n**n, "num_l": 2**n - 1, "num_r": bell(n)},
                description="full transformation monoid",
            )
        if family == "ST":
            return CatalogEntry(
                name=f"ST{n}",
                kind="semigroup",
                family="ST",
                n=n,
                builder=lambda: CatalogService.singular_part(n),
                expected_flags=RIGHT_ZERO_FLAGS if n == 2 else SINGULAR_FLAGS,
                expected_counts={"order": n**n - factorial(n), "num_l": 2**n - 2, "num_r": bell(n) - 1},
                description="singular transformations",
            )
        if family == "I":
            return CatalogEntry(
                name=f"I{n}",
                kind="semigroup",
                family="I",
                n=n,
                builder=lambda: CatalogService.symmetric_inverse_monoid(n),
                expected_flags=ALL_FLAGS if n == 1 else INVERSE_MONOID_FLAGS,
                expected_counts={
                    "order": sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1)),
                    "num_l": 2**n,
                    "num_r": 2**n,
                },
                description="symmetric inverse monoid",
            )
        if family == "P":
            flags = {"bounded_above": True, "supported": n <= 2}
            if n <= 2:
                flags["self_supported"] = n == 1
            return CatalogEntry(
                name=f"P{n}",
                kind="category",
                family="P",
                n=n,
                builder=lambda: CatalogService.powerset_category(n),
                expected_flags=flags,
                expected_counts={"objects": 2**n - 1, "cones": n**n, "classes": bell(n)},
                description="nonempty subsets with all maps, connected by partitions",
            )
        if family == "SP":
            flags = {"bounded_above": False, "supported": n == 2}
            if n == 2:
                flags["self_supported"] = False
            return CatalogEntry(
                name=f"SP{n}",
                kind="category",
                family="SP",
                n=n,
                builder=lambda: CatalogService.singular_powerset(n),
                expected_flags=flags,
                expected_counts={"objects": 2**n - 2, "cones": n**n - factorial(n), "classes": bell(n) - 1},
                description="proper nonempty subsets with all maps",
            )
        if family == "X":
            order = sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
            return CatalogEntry(
                name=f"X{n}",
                kind="category",
                family="X",
                n=n,
                builder=lambda: CatalogService.partial_bijection_category(n),
                expected_flags={"bounded_above": True, "supported": True, "self_supported": True},
                expected_counts={"objects": 2**n, "cones": order, "classes": 2**n},
                description="subsets with partial bijections",
            )
        raise UnknownCatalogEntry(f"{family}{n}")

    @staticmethod
    def _named_entries() -> List[CatalogEntry]:
        expectations = {
            "L2": (LEFT_ZERO_FLAGS, {"order": 2, "num_l": 1, "num_r": 2}, "left-zero band"),
            "R2": (RIGHT_ZERO_FLAGS, {"order": 2, "num_l": 2, "num_r": 1}, "right-zero band"),
            "Z2": (INVERSE_MONOID_FLAGS, {"order": 2, "num_l": 1, "num_r": 1}, "cyclic group of order 2"),
            "SL2": (ALL_FLAGS, {"order": 2, "num_l": 2, "num_r": 2}, "two-element semilattice"),
            "L2Z": (LEFT_ZERO_FLAGS, {"order": 3, "num_l": 2, "num_r": 3}, "left-zero pair with zero adjoined"),
            "RRB3": (
                _flags(
                    "regular", "left_reductive", "right_reductive", "l_unipotent", "band", "right_regular_band", "monoid"
                ),
                {"order": 3, "num_l": 3, "num_r": 2},
                "right-zero pair with identity adjoined",
            ),
            "B4": (RIGHT_ZERO_FLAGS, {"order": 4, "num_l": 4, "num_r": 2}, "right-zero pair times semilattice"),
        }
        return [
            CatalogEntry(
                name=name,
                kind="semigroup",
                family="named",
                n=None,
                builder=lambda name=name: CatalogService.named_semigroups()[name],
                expected_flags=flags,
                expected_counts=counts,
                description=description,
            )
            for name, (flags, counts, description) in expectations.items()
        ]

    @staticmethod
    def census_entries(max_order: int = 4) -> List[CatalogEntry]:
        entries = []
        for k in range(1, max_order + 1):
            for band in CatalogService.right_regular_bands(k):
                entries.append(
                    CatalogEntry(
                        name=band.name,
                        kind="semigroup",
                        family="RRB",
                        n=k,
                        builder=lambda band=band: band,
                        expected_flags={"band": True, "right_regular_band": True, "l_unipotent": True},
                        expected_counts={"order": k},
                        description="right regular band",
                    )
                )
        return entries

    @staticmethod
    def entries(include_census: bool = False) -> List[CatalogEntry]:
        """Every registered entry within the configured caps."""
        sg_cap = settings.MAX_CATALOG_SEMIGROUP_N
        cat_cap = settings.MAX_CATALOG_CATEGORY_N
        result = CatalogService._named_entries()
        for n in range(1, sg_cap + 1):
            result.append(CatalogService._family_entry("T", n))
        for n in range(2, sg_cap + 1):
            result.append(CatalogService._family_entry("ST", n))
        for n in range(1, sg_cap + 1):
            result.append(CatalogService._family_entry("I", n))
        for n in range(1, cat_cap + 1):
            result.append(CatalogService._family_entry("P", n))
        for n in range(2, cat_cap + 1):
            result.append(CatalogService._family_entry("SP", n))
        for n in range(1, cat_cap + 1):
            result.append(CatalogService._family_entry("X", n))
        if include_census:
            result.extend(CatalogService.census_entries())
        return result

    @staticmethod
    def get(name: str) -> CatalogEntry:
        """Resolve an exact name, then ``FAMILY<n>`` or ``FAMILY:n``.

        Raises:
            UnknownCatalogEntry: nothing matches
        """
        key = name.strip()
        for entry in CatalogService._named_entries():
            if entry.name == key:
                return entry
        if key.startswith("RRB") and "." in key:
            for entry in CatalogService.census_entries(int(key[3]) if key[3:4].isdigit() else 4):
                if entry.name == key:
                    return entry
            raise UnknownCatalogEntry(name)
        match = _NAME_PATTERN.match(key.upper())
        if match is None:
            raise UnknownCatalogEntry(name)
        return CatalogService._family_entry(match.group(1), int(match.group(2)))

    @staticmethod
    def build(name: str) -> Built:
        """Build the object a catalog name refers to; recent builds are reused."""
        return _build_entry(CatalogService.get(name).name)

    @staticmethod
    def verify_entry(entry: CatalogEntry) -> CheckReport:
        """Compare a built entry with its recorded expectations."""
        built = CatalogService.build(entry.name)
        report = CheckReport(subject=entry.name)
        if entry.kind == "semigroup":
            S = built
            flags = SemigroupService.classify(S)
            actual = flags.as_dict()
            for key, expected in entry.expected_flags.items():
                report.add(f"flag.{key}", actual[key] == expected, f"expected {expected}, got {actual[key]}")
            problems = flags.inconsistencies()
            report.add("flags_consistent", not problems, "; ".join(problems))
            g = SemigroupService.greens(S)
            counts = {"order": S.size, "num_l": g.num_l, "num_r": g.num_r}
            for key, expected in entry.expected_counts.items():
                report.add(f"count.{key}", counts[key] == expected, f"expected {expected}, got {counts[key]}")
            maps = {
                "T": CatalogService.transformations,
                "ST": CatalogService.singular_transformations,
                "I": CatalogService.partial_injections,
            }.get(entry.family)
            if maps is not None:
                report.extend(CatalogService.image_kernel_check(S, maps(entry.n)))
            return report

        cc = built
        counts = {"objects": cc.category.num_objects, "cones": cc.full.size, "classes": len(cc.downset)}
        for key, expected in entry.expected_counts.items():
            report.add(f"count.{key}", counts[key] == expected, f"expected {expected}, got {counts[key]}")
        actual = {
            "bounded_above": ConnectedService.is_bounded_above(cc.category) is not None,
            "supported": ConnectedService.is_supported(cc),
        }
        if "self_supported" in entry.expected_flags:
            actual["self_supported"] = actual["supported"] and ConnectedService.is_self_supported(cc)
        for key, expected in entry.expected_flags.items():
            report.add(f"flag.{key}", actual[key] == expected, f"expected {expected}, got {actual[key]}")
        if entry.family in ("P", "SP"):
            report.extend(CatalogService.partition_check(cc, entry.n))
        return report

    @staticmethod
    def broken_connection_morphism() -> CCMorphism:
        """Identity on 𝕡₃ paired with the swap of two incomparable two-block partitions.

        The object {1,3} is connected by {{1,2},{3}} but not by {{1,3},{2}},
        so the pair breaks the connection condition.
        """
        cc = CatalogService.build("P3")
        by_label = {label: d for d, label in cc.class_labels.items()}
        return FunctorService.class_swap(cc, by_label["{{1,2},{3}}"], by_label["{{1,3},{2}}"])

    @staticmethod
    def semilattice_into_powerset() -> Tuple[FiniteSemigroup, ConnectedCategory, Tuple[int, ...]]:
        """SL2 -> E(Ĉ(𝕡₂)): identity to ε_k, zero to the idempotent cone with vertex {1}."""
        B = CatalogService.named_semigroups()["SL2"]
        cc = CatalogService.build("P2")
        sub = ConnectedService.connection_semigroup(cc)
        top = ConnectedService.bounded_above_identity(cc)
        if top is None:
            raise IsoFailure("P2 has no bounded-above identity")
        vertex = cc.category.object_index[(0,)]
        low = next(
            i for i, cone in enumerate(sub.cones) if cone.vertex == vertex and ConeService.is_idempotent(cc.category, cone)
        )
        return B, cc, (top, low)


@lru_cache(maxsize=64)
def _build_entry(name: str) -> Built:
    built = CatalogService.get(name).build()
    logger.info(f"Built catalog entry {name}", extra={"stage": "catalog"})
    return built

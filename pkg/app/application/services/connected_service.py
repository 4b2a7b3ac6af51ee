"""Connected categories, connection semigroups and their refinements."""

import logging
import weakref
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.application.dto.check_dto import CheckReport
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import (
    IndexOutOfRange,
    IsoFailure,
    NotDownClosed,
    NotInConnectionSemigroup,
    NotSupported,
    ObjectNotConnected,
)
from app.domain.entities.category import FiniteCategory, LeftCategory
from app.domain.entities.cone import ConeSemigroup
from app.domain.entities.connected import ConnectedCategory, SupportMap
from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import FiniteSemigroup

logger = logging.getLogger(__name__)

_CONNECTION_SEMIGROUPS: "weakref.WeakKeyDictionary[ConnectedCategory, ConeSemigroup]" = weakref.WeakKeyDictionary()


class ConnectedService:
    """Service for connected categories."""

    @staticmethod
    def r_class_poset(hat: ConeSemigroup) -> FinitePoset:
        """(Ĉ/ℛ, ⊑) with R-classes numbered as in the Green's data of ``hat``."""
        return SemigroupService.quotient_poset_R(hat.semigroup)

    @staticmethod
    def check_connected(
        C: FiniteCategory,
        hat: ConeSemigroup,
        downset: Sequence[int],
        class_labels: Optional[Dict[int, str]] = None,
        source: Optional[LeftCategory] = None,
        name: str = "",
    ) -> ConnectedCategory:
        """Validate a down-set of Ĉ/ℛ and build the connection table.

        Raises:
            IndexOutOfRange: a class index is not an R-class of Ĉ
            NotDownClosed: a class below a member is missing
            ObjectNotConnected: some object is the vertex of no idempotent cone in the down-set
        """
        g = SemigroupService.greens(hat.semigroup)
        members = sorted(set(int(d) for d in downset))
        for d in members:
            if d < 0 or d >= g.num_r:
                raise IndexOutOfRange(d, g.num_r, where="down-set")
        poset = ConnectedService.r_class_poset(hat)
        gap = poset.is_down_closed(members)
        if gap is not None:
            raise NotDownClosed(*gap)

        member_set = set(members)
        connection: Dict[Tuple[int, int], int] = {}
        for e in g.idempotents:
            d = int(g.r_class[e])
            if d not in member_set:
                continue
            key = (hat.cones[e].vertex, d)
            if key in connection:
                raise IsoFailure("two idempotent cones share vertex and R-class", key)
            connection[key] = e
        for c in range(C.num_objects):
            if not any((c, d) in connection for d in members):
                raise ObjectNotConnected(c)
        cc = ConnectedCategory(
            category=C,
            full=hat,
            downset=tuple(members),
            connection=connection,
            class_labels=dict(class_labels or {}),
            source=source,
            name=name or C.name,
        )
        logger.info(
            f"Connected {C!r} by {len(members)} of {g.num_r} R-classes",
            extra={"object_count": C.num_objects, "stage": "connect"},
        )
        return cc

    @staticmethod
    def connect_fully(C: FiniteCategory, cap: Optional[int] = None, name: str = "") -> ConnectedCategory:
        """Enumerate Ĉ and connect C by all of Ĉ/ℛ."""
        hat = ConeService.enumerate_cones(C, cap=cap)
        g = SemigroupService.greens(hat.semigroup)
        return ConnectedService.check_connected(C, hat, range(g.num_r), name=name)

    @staticmethod
    def connection_semigroup(cc: ConnectedCategory) -> ConeSemigroup:
        """Ĉ_𝔇: cones whose R-class lies in the down-set, as a closed subsemigroup."""
        cached = _CONNECTION_SEMIGROUPS.get(cc)
        if cached is not None:
            return cached
        hat = cc.full
        g = SemigroupService.greens(hat.semigroup)
        members = set(cc.downset)
        keep = [i for i in range(hat.size) if int(g.r_class[i]) in members]
        if len(keep) == hat.size:
            sub = ConeSemigroup(
                category=hat.category,
                cones=hat.cones,
                semigroup=hat.semigroup,
                parent=tuple(range(hat.size)),
            )
        else:
            sub = ConeService.from_cones(
                hat.category,
                [hat.cones[i] for i in keep],
                parent=keep,
                name=f"Ĉ_D({cc.category.name or 'C'})",
            )
        _CONNECTION_SEMIGROUPS[cc] = sub
        return sub

    @staticmethod
    def member_of(cc: ConnectedCategory, cone_index: int) -> bool:
        g = SemigroupService.greens(cc.full.semigroup)
        return int(g.r_class[cone_index]) in set(cc.downset)

    @staticmethod
    def r_class_of(cc: ConnectedCategory, cone_index: int) -> int:
        return int(SemigroupService.greens(cc.full.semigroup).r_class[cone_index])

    @staticmethod
    def decompose(cc: ConnectedCategory, cone_index: int) -> Tuple[int, int]:
        """γ = ε(c, 𝔡) ∗ u with 𝔡 = R_γ, c the least object connected by 𝔡 and u = γ(c).

        Args:
            cc: Connected category
            cone_index: Index of γ in the full cone semigroup

        Returns:
            (index of ε in Ĉ, isomorphism u)

        Raises:
            NotInConnectionSemigroup: R_γ is outside the down-set
        """
        decompositions = ConnectedService.decompositions(cc, cone_index)
        if not decompositions:
            raise IsoFailure("cone in the connection semigroup has no decomposition", cone_index)
        return decompositions[0]

    @staticmethod
    def decompositions(cc: ConnectedCategory, cone_index: int) -> List[Tuple[int, int]]:
        """Every (ε(c, R_γ), γ(c)) with γ(c) an isomorphism and ε ∗ γ(c) = γ."""
        if not ConnectedService.member_of(cc, cone_index):
            raise NotInConnectionSemigroup(cone_index)
        C = cc.category
        hat = cc.full
        gamma = hat.cones[cone_index]
        d = ConnectedService.r_class_of(cc, cone_index)
        isos = CategoryService.isomorphisms(C)
        result = []
        for c in cc.objects_connected_by(d):
            u = gamma[c]
            if not isos[u]:
                continue
            eps = cc.epsilon(c, d)
            if ConeService.star(C, hat.cones[eps], u) == gamma:
                result.append((eps, u))
        return result

    @staticmethod
    def epi_decompositions(cc: ConnectedCategory, cone_index: int) -> List[Tuple[int, int]]:
        """Every (ε, p) with ε idempotent in Ĉ_𝔇, p = γ(z_ε) epimorphic and ε ∗ p = γ."""
        if not ConnectedService.member_of(cc, cone_index):
            raise NotInConnectionSemigroup(cone_index)
        C = cc.category
        hat = cc.full
        gamma = hat.cones[cone_index]
        result = []
        for eps in sorted(cc.connection.values()):
            p = gamma[hat.cones[eps].vertex]
            if CategoryService.is_epi(C, p) and ConeService.star(C, hat.cones[eps], p) == gamma:
                result.append((eps, p))
        return result

    @staticmethod
    def epi_closure_failures(cc: ConnectedCategory) -> List[Tuple[int, int]]:
        """Pairs (ε, p) with ε ∗ p outside Ĉ_𝔇 for an epimorphism p out of z_ε."""
        C = cc.category
        hat = cc.full
        failures = []
        for eps in sorted(cc.connection.values()):
            z = hat.cones[eps].vertex
            for p in C.out_of(z):
                if not CategoryService.is_epi(C, int(p)):
                    continue
                cone = ConeService.star(C, hat.cones[eps], int(p))
                index = hat.index.get(cone)
                if index is None or not ConnectedService.member_of(cc, index):
                    failures.append((eps, int(p)))
        return failures

    @staticmethod
    def connected_checks(cc: ConnectedCategory) -> CheckReport:
        """Green's structure of Ĉ_𝔇 against its connected-category description."""
        report = CheckReport(subject=f"{cc.name} connection semigroup")
        C = cc.category
        hat = cc.full
        sub = ConnectedService.connection_semigroup(cc)
        report.add("closed_under_composition", True)
        report.add("regular", SemigroupService.is_regular(sub.semigroup))
        report.add(
            "left_reductive",
            SemigroupService.is_left_reductive(sub.semigroup),
            SemigroupService.left_reductive_witness(sub.semigroup),
        )
        used = {d for (_, d) in cc.connection}
        idle = [d for d in cc.downset if d not in used]
        report.add("every_class_connects_an_object", not idle, idle[:1])

        sg = SemigroupService.greens(sub.semigroup)
        full_r = SemigroupService.greens(hat.semigroup).r_class
        poset = ConnectedService.r_class_poset(hat)
        vertices = np.asarray([cone.vertex for cone in sub.cones])
        parent = np.asarray(sub.parent)
        classes = full_r[parent]

        left_pred = C.leq[vertices[:, None], vertices[None, :]]
        bad = np.argwhere(left_pred != sg.leq_l)
        report.add("left_order_is_vertex_order", bad.size == 0, bad[:1].tolist())

        right_pred = poset.leq[classes[:, None], classes[None, :]]
        bad = np.argwhere(right_pred != sg.leq_r)
        report.add("right_order_is_class_order", bad.size == 0, bad[:1].tolist())

        # R-classes of Ĉ_𝔇 correspond one-to-one and in order to the down-set
        reps = [sg.r_members(i)[0] for i in range(sg.num_r)]
        image = [int(classes[x]) for x in reps]
        bijective = sorted(image) == sorted(cc.downset)
        order_ok = bijective and bool(
            np.array_equal(sg.leq_r[np.ix_(reps, reps)], poset.leq[np.ix_(image, image)])
        )
        report.add("r_classes_match_downset", order_ok, image)

        eps_bad = None
        position = {int(p): i for i, p in enumerate(sub.parent)}
        items = sorted(cc.connection.items())
        for (c1, d1), e1 in items:
            for (c2, d2), e2 in items:
                i1, i2 = position[e1], position[e2]
                if bool(sg.leq_r[i1, i2]) != bool(poset.leq[d1, d2]) or bool(sg.leq_l[i1, i2]) != bool(
                    C.leq[c1, c2]
                ):
                    eps_bad = ((c1, d1), (c2, d2))
                    break
            if eps_bad:
                break
        report.add("idempotent_orders_follow_indices", eps_bad is None, eps_bad)

        missing = []
        ambiguous = []
        for i in parent.tolist():
            if not ConnectedService.decompositions(cc, i):
                missing.append(i)
            if not ConnectedService.epi_decompositions(cc, i):
                ambiguous.append(i)
        report.add("iso_decomposition_exists", not missing, missing[:1])
        report.add("epi_decomposition_exists", not ambiguous, ambiguous[:1])
        closure = ConnectedService.epi_closure_failures(cc)
        report.add("epi_star_stays_in_connection_semigroup", not closure, closure[:1])
        return report

    # ------------------------------------------------------------------
    # supported and self-supported categories

    @staticmethod
    def is_supported(cc: ConnectedCategory) -> bool:
        return all(len(cc.classes_connecting(c)) == 1 for c in range(cc.category.num_objects))

    @staticmethod
    def support_map(cc: ConnectedCategory) -> SupportMap:
        """Γ: object -> its unique connecting class.

        Raises:
            NotSupported: some object is connected by several classes
        """
        assignment = []
        for c in range(cc.category.num_objects):
            classes = cc.classes_connecting(c)
            if len(classes) != 1:
                raise NotSupported(c)
            assignment.append(classes[0])
        return SupportMap(tuple(assignment))

    @staticmethod
    def supported_checks(cc: ConnectedCategory) -> CheckReport:
        """Properties every supported category must have."""
        report = CheckReport(subject=f"{cc.name} supported")
        gamma = ConnectedService.support_map(cc)
        C = cc.category
        poset = ConnectedService.r_class_poset(cc.full)
        report.add("support_map_surjective", set(gamma.assignment) == set(cc.downset))
        bad = [
            (a, b)
            for a in range(C.num_objects)
            for b in range(C.num_objects)
            if C.leq[a, b] and not poset.leq[gamma[a], gamma[b]]
        ]
        report.add("support_map_order_preserving", not bad, bad[:1])

        sub = ConnectedService.connection_semigroup(cc).semigroup
        report.add("connection_semigroup_l_unipotent", SemigroupService.is_l_unipotent(sub))
        E = SemigroupService.idempotents(sub)
        closed = all(sub.mul(e, f) in set(E) for e in E for f in E)
        report.add("idempotents_closed", closed)
        rrb_bad = next(((e, f) for e in E for f in E if sub.product(e, f, e) != sub.mul(f, e)), None)
        report.add("idempotents_right_regular", rrb_bad is None, rrb_bad)
        report.add("idempotents_match_objects", len(E) == C.num_objects, len(E))
        return report

    @staticmethod
    def is_self_supported(cc: ConnectedCategory) -> bool:
        """Whether the support map is an order isomorphism onto the down-set.

        Raises:
            NotSupported: the category is not supported
        """
        gamma = ConnectedService.support_map(cc)
        C = cc.category
        if len(set(gamma.assignment)) != C.num_objects:
            return False
        poset = ConnectedService.r_class_poset(cc.full)
        for a in range(C.num_objects):
            for b in range(C.num_objects):
                if bool(C.leq[a, b]) != bool(poset.leq[gamma[a], gamma[b]]):
                    return False
        return True

    # ------------------------------------------------------------------
    # bounded above categories and duality

    @staticmethod
    def is_bounded_above(C: FiniteCategory) -> Optional[int]:
        """Largest object, or None."""
        return C.poset.largest()

    @staticmethod
    def bounded_above_identity(cc: ConnectedCategory) -> Optional[int]:
        """Index in Ĉ_𝔇 of ε_k (inclusions into the largest object k) when it is a two-sided identity."""
        C = cc.category
        k = ConnectedService.is_bounded_above(C)
        if k is None:
            return None
        sub = ConnectedService.connection_semigroup(cc)
        cone = tuple(int(C.inclusion[c, k]) for c in range(C.num_objects))
        for i, candidate in enumerate(sub.cones):
            if candidate.vertex == k and candidate.components == cone:
                table = sub.table
                ar = np.arange(sub.size)
                if np.array_equal(table[i], ar) and np.array_equal(table[:, i], ar):
                    return i
                return None
        return None

    @staticmethod
    def dual_connection_semigroup(cc: ConnectedCategory) -> FiniteSemigroup:
        """Ĉ_𝔇 under γ∘δ = δ ∗ (γ(z_δ))°, which is the opposite product δ·γ."""
        sub = ConnectedService.connection_semigroup(cc)
        C = cc.category
        n = sub.size
        table = np.empty((n, n), dtype=np.int64)
        for i, gamma in enumerate(sub.cones):
            for k, delta in enumerate(sub.cones):
                p = CategoryService.epi_component(C, gamma[delta.vertex])
                table[i, k] = sub.index[ConeService.star(C, delta, p)]
        if not np.array_equal(table, sub.table.T):
            raise IsoFailure("dual product differs from the opposite product")
        return SemigroupService.from_cayley_table(
            table,
            labels=sub.semigroup.labels,
            name=f"{sub.semigroup.name}^op",
        )

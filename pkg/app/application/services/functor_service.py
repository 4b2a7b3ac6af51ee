"""Functors between left reductive regular semigroups and connected categories.

``functor_C`` sends S to 𝕃(S) connected by the R-classes of its principal
cones; ``functor_S`` sends a connected category to its connection
semigroup. The roundtrips, CC-morphisms built from homomorphisms and
homomorphisms built from CC-morphisms are all verified on the instance.
"""

import logging
import weakref
from typing import Dict, List, Optional, Sequence, Tuple

from app.application.dto.check_dto import CheckReport
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.connected_service import ConnectedService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import (
    CCConditionViolated,
    IsoFailure,
    NotHomomorphism,
    NotLeftReductive,
)
from app.domain.entities.connected import ConnectedCategory
from app.domain.entities.morphisms import CategoryIso, CCMorphism, Homomorphism, SemigroupIso
from app.domain.entities.semigroup import FiniteSemigroup

logger = logging.getLogger(__name__)

_CONNECTED: "weakref.WeakKeyDictionary[FiniteSemigroup, ConnectedCategory]" = weakref.WeakKeyDictionary()
_PRINCIPAL: "weakref.WeakKeyDictionary[ConnectedCategory, List[int]]" = weakref.WeakKeyDictionary()


def _first_failure(report: CheckReport) -> Tuple[str, Optional[str]]:
    failure = report.failures()[0]
    return failure.name, failure.witness


class FunctorService:
    """Service for the functors C and S and the morphisms between their images."""

    @staticmethod
    def functor_C(S: FiniteSemigroup) -> ConnectedCategory:
        """𝕃(S) connected by ℜ = {R_{r^e} : e ∈ E(S)}.

        Raises:
            NotRegular: S is not regular
            NotLeftReductive: two elements have the same right translation
        """
        cached = _CONNECTED.get(S)
        if cached is not None:
            return cached
        SemigroupService.require_regular(S)
        witness = SemigroupService.left_reductive_witness(S)
        if witness is not None:
            raise NotLeftReductive(*witness)
        L = CategoryService.build_left_category(S)
        hat = ConeService.enumerate_cones(L.category)
        g = SemigroupService.greens(hat.semigroup)
        principal = ConeService.principal_map(L, hat)
        labels: Dict[int, str] = {}
        for e in SemigroupService.idempotents(S):
            labels.setdefault(int(g.r_class[principal[e]]), f"R[{S.labels[e]}]")
        cc = ConnectedService.check_connected(
            L.category,
            hat,
            sorted(labels),
            class_labels=labels,
            source=L,
            name=f"{L.category.name}_R",
        )
        _PRINCIPAL[cc] = principal
        _CONNECTED[S] = cc
        logger.info(
            f"Built {cc!r} from {S!r}",
            extra={"stage": "functor_C", "semigroup_order": S.size, "cone_count": hat.size},
        )
        return cc

    @staticmethod
    def functor_S(cc: ConnectedCategory) -> FiniteSemigroup:
        """The connection semigroup Ĉ_𝔇 with cone labels."""
        return ConnectedService.connection_semigroup(cc).semigroup

    @staticmethod
    def principal_indices(cc: ConnectedCategory) -> List[int]:
        """Index in the full cone semigroup of r^a for every a of the source semigroup."""
        cached = _PRINCIPAL.get(cc)
        if cached is None:
            if cc.source is None:
                raise ValueError("Connected category was not built from a semigroup")
            cached = ConeService.principal_map(cc.source, cc.full)
            _PRINCIPAL[cc] = cached
        return cached

    @staticmethod
    def _principal_iso(S: FiniteSemigroup, cc: ConnectedCategory) -> Tuple[int, ...]:
        sub = ConnectedService.connection_semigroup(cc)
        position = {p: i for i, p in enumerate(sub.parent)}
        mapping = []
        for a, p in enumerate(FunctorService.principal_indices(cc)):
            if p not in position:
                raise IsoFailure("principal cone outside the connection semigroup", S.labels[a])
            mapping.append(position[p])
        if sub.size != S.size or len(set(mapping)) != S.size:
            raise IsoFailure("principal cones are not in bijection with the semigroup", (S.size, sub.size))
        return tuple(mapping)

    @staticmethod
    def roundtrip_semigroup(S: FiniteSemigroup) -> SemigroupIso:
        """ρ̄: S -> Ĉ(𝕃(S)_ℜ), a ↦ r^a, verified on all pairs.

        Raises:
            IsoFailure: ρ̄ is not a bijective homomorphism
        """
        cc = FunctorService.functor_C(S)
        mapping = FunctorService._principal_iso(S, cc)
        target = FunctorService.functor_S(cc)
        witness = SemigroupService.homomorphism_witness(S, target, mapping)
        if witness is not None:
            raise IsoFailure("principal map is not multiplicative", witness)
        return SemigroupIso(S, target, mapping)

    @staticmethod
    def roundtrip_semigroup_dual(S: FiniteSemigroup) -> SemigroupIso:
        """For right reductive regular S: S is isomorphic to the dual connection semigroup of C(S^op).

        Raises:
            NotLeftReductive: S is not right reductive (witness from S^op)
        """
        op = SemigroupService.opposite(S)
        cc = FunctorService.functor_C(op)
        mapping = FunctorService._principal_iso(op, cc)
        dual = ConnectedService.dual_connection_semigroup(cc)
        witness = SemigroupService.homomorphism_witness(S, dual, mapping)
        if witness is not None:
            raise IsoFailure("principal map is not multiplicative for the dual product", witness)
        return SemigroupIso(S, dual, mapping)

    # ------------------------------------------------------------------
    # CC-morphisms

    @staticmethod
    def cc_morphism_checks(m: CCMorphism) -> CheckReport:
        """Functor laws, order preservation of G and preservation of the connection ε."""
        src, dst = m.source, m.target
        report = IsomorphismService.functor_report(
            src.category, dst.category, m.object_map, m.morphism_map, subject=repr(m)
        )
        targets = set(dst.downset)
        stray = [d for d in src.downset if m.class_map.get(d) not in targets]
        report.add("class_map_into_downset", not stray, stray[:1])

        poset_s = ConnectedService.r_class_poset(src.full)
        poset_t = ConnectedService.r_class_poset(dst.full)
        unordered = [
            (d1, d2)
            for d1 in src.downset
            for d2 in src.downset
            if not stray and poset_s.leq[d1, d2] and not poset_t.leq[m.class_map[d1], m.class_map[d2]]
        ]
        report.add("class_map_order_preserving", not unordered, unordered[:1])

        broken = None
        for (c, d), eps in sorted(src.connection.items()):
            target_eps = dst.epsilon(m.object_map[c], m.class_map.get(d, -1))
            if target_eps is None:
                broken = f"no connecting cone at ({dst.category.object_labels[m.object_map[c]]}, G{d})"
                break
            cone = src.full.cones[eps]
            image = dst.full.cones[target_eps]
            for c2 in range(src.category.num_objects):
                if m.morphism_map[cone[c2]] != image[m.object_map[c2]]:
                    broken = f"component at {src.category.object_labels[c2]} of ε({c},{d})"
                    break
            if broken:
                break
        report.add("connection_preserved", broken is None, broken)
        return report

    @staticmethod
    def identity(cc: ConnectedCategory) -> CCMorphism:
        C = cc.category
        return CCMorphism(
            cc,
            cc,
            tuple(range(C.num_objects)),
            tuple(range(C.num_morphisms)),
            {d: d for d in cc.downset},
        )

    @staticmethod
    def compose(first: CCMorphism, second: CCMorphism) -> CCMorphism:
        """Left-to-right composite: first, then second."""
        return CCMorphism(
            first.source,
            second.target,
            tuple(second.object_map[x] for x in first.object_map),
            tuple(second.morphism_map[x] for x in first.morphism_map),
            {d: second.class_map[x] for d, x in first.class_map.items() if x in second.class_map},
        )

    @staticmethod
    def class_swap(cc: ConnectedCategory, d1: int, d2: int) -> CCMorphism:
        """Identity functor paired with the class map exchanging d1 and d2."""
        m = FunctorService.identity(cc)
        class_map = dict(m.class_map)
        class_map[d1], class_map[d2] = d2, d1
        return CCMorphism(cc, cc, m.object_map, m.morphism_map, class_map)

    @staticmethod
    def roundtrip_category(cc: ConnectedCategory) -> CCMorphism:
        """The CC-isomorphism 𝕃(Ĉ_𝔇) connected by its principal classes -> cc.

        F(Tε) = z_ε and F(r(ε₁, γ, ε₂)) = γ(z_ε₁) j(z_γ, z_ε₂); G sends the
        class of r^ε to R_ε.

        Raises:
            IsoFailure: the pair is not a CC-isomorphism
        """
        sub = ConnectedService.connection_semigroup(cc)
        T = sub.semigroup
        rt = FunctorService.functor_C(T)
        L2 = rt.source
        C = cc.category
        object_map = [sub.cones[e].vertex for e in rt.category.object_data]
        morphism_map = []
        for m in range(rt.category.num_morphisms):
            tr = L2.triple(m)
            gamma = sub.cones[tr.u]
            z1 = sub.cones[tr.e].vertex
            z2 = sub.cones[tr.f].vertex
            morphism_map.append(C.comp(gamma[z1], C.j(gamma.vertex, z2)))

        rt_r = SemigroupService.greens(rt.full.semigroup).r_class
        cc_r = SemigroupService.greens(cc.full.semigroup).r_class
        principal = FunctorService.principal_indices(rt)
        class_map: Dict[int, int] = {}
        for eps in SemigroupService.idempotents(T):
            d2 = int(rt_r[principal[eps]])
            d = int(cc_r[sub.parent[eps]])
            if class_map.setdefault(d2, d) != d:
                raise IsoFailure("class map is not well defined", d2)

        result = CCMorphism(rt, cc, tuple(object_map), tuple(morphism_map), class_map)
        report = FunctorService.cc_morphism_checks(result)
        report.extend(
            IsomorphismService.category_iso_report(rt.category, C, result.object_map, result.morphism_map),
            prefix="iso.",
        )
        poset_s = ConnectedService.r_class_poset(rt.full)
        poset_t = ConnectedService.r_class_poset(cc.full)
        reflected = all(
            bool(poset_s.leq[a, b]) == bool(poset_t.leq[class_map[a], class_map[b]])
            for a in class_map
            for b in class_map
        )
        report.add("class_map_order_isomorphism", result.is_bijective and reflected)
        if not report.passed:
            raise IsoFailure(*_first_failure(report))
        logger.info(f"Category roundtrip verified for {cc!r}", extra={"stage": "roundtrip_category"})
        return result

    @staticmethod
    def hom_to_cc(
        phi: Sequence[int],
        S: FiniteSemigroup,
        T: FiniteSemigroup,
        source: Optional[ConnectedCategory] = None,
        target: Optional[ConnectedCategory] = None,
    ) -> CCMorphism:
        """m_φ = (F_φ, G_φ): F_φ(Se) = T(eφ), F_φ(r(e,u,f)) = r(eφ,uφ,fφ), G_φ(𝔯_e) = 𝔯_{eφ}.

        Raises:
            NotHomomorphism: φ is not multiplicative
        """
        mapping = tuple(int(x) for x in phi)
        witness = SemigroupService.homomorphism_witness(S, T, mapping)
        if witness is not None:
            raise NotHomomorphism(*witness)
        src = source or FunctorService.functor_C(S)
        dst = target or FunctorService.functor_C(T)
        L, L2 = src.source, dst.source
        object_map = [L2.object_of(mapping[e]) for e in L.category.object_data]
        morphism_map = [
            L2.morphism(mapping[tr.e], mapping[tr.u], mapping[tr.f]) for tr in L.category.morphism_data
        ]

        src_r = SemigroupService.greens(src.full.semigroup).r_class
        dst_r = SemigroupService.greens(dst.full.semigroup).r_class
        principal_s = FunctorService.principal_indices(src)
        principal_t = FunctorService.principal_indices(dst)
        class_map: Dict[int, int] = {}
        for e in SemigroupService.idempotents(S):
            d = int(src_r[principal_s[e]])
            d2 = int(dst_r[principal_t[mapping[e]]])
            if class_map.setdefault(d, d2) != d2:
                raise IsoFailure("class map is not well defined", d)

        m = CCMorphism(src, dst, tuple(object_map), tuple(morphism_map), class_map)
        report = FunctorService.cc_morphism_checks(m)
        if not report.passed:
            raise CCConditionViolated(*_first_failure(report))
        return m

    @staticmethod
    def cc_to_hom(m: CCMorphism) -> Homomorphism:
        """φ_m: ε(c,𝔡) ∗ u ↦ ε(F(c), G(𝔡)) ∗ F(u), checked against every decomposition.

        Raises:
            CCConditionViolated: m breaks the connection condition, or φ_m
                is not well defined or not multiplicative
        """
        report = FunctorService.cc_morphism_checks(m)
        if not report.passed:
            raise CCConditionViolated(*_first_failure(report))
        src, dst = m.source, m.target
        src_sub = ConnectedService.connection_semigroup(src)
        dst_sub = ConnectedService.connection_semigroup(dst)
        dst_position = {p: i for i, p in enumerate(dst_sub.parent)}
        mapping = []
        for i, full_index in enumerate(src_sub.parent):
            images = set()
            for eps, u in ConnectedService.decompositions(src, full_index):
                c = src.full.cones[eps].vertex
                d = ConnectedService.r_class_of(src, eps)
                target_eps = dst.epsilon(m.object_map[c], m.class_map[d])
                cone = ConeService.star(dst.category, dst.full.cones[target_eps], m.morphism_map[u])
                index = dst.full.index.get(cone)
                if index is None or index not in dst_position:
                    raise CCConditionViolated("image is outside the target connection semigroup", i)
                images.add(dst_position[index])
            if not images:
                raise IsoFailure("cone has no decomposition", i)
            if len(images) > 1:
                raise CCConditionViolated("image depends on the decomposition", i)
            mapping.append(images.pop())
        witness = SemigroupService.homomorphism_witness(src_sub.semigroup, dst_sub.semigroup, mapping)
        if witness is not None:
            raise CCConditionViolated("induced map is not multiplicative", witness)
        return Homomorphism(src_sub.semigroup, dst_sub.semigroup, tuple(mapping))

    @staticmethod
    def naturality_check(phi: Sequence[int], S: FiniteSemigroup, T: FiniteSemigroup) -> CheckReport:
        """ρ̄(S) then CS(φ) equals φ then ρ̄(T), elementwise."""
        report = CheckReport(subject=f"naturality {S.name or 'S'} -> {T.name or 'T'}")
        src = FunctorService.functor_C(S)
        dst = FunctorService.functor_C(T)
        m = FunctorService.hom_to_cc(phi, S, T, src, dst)
        induced = FunctorService.cc_to_hom(m)
        rho_s = FunctorService._principal_iso(S, src)
        rho_t = FunctorService._principal_iso(T, dst)
        bad = [S.labels[a] for a in range(S.size) if induced[rho_s[a]] != rho_t[int(phi[a])]]
        report.add("naturality_square_commutes", not bad, bad[:1])
        return report

    @staticmethod
    def transported_class_map(
        a: ConnectedCategory, b: ConnectedCategory, iso: CategoryIso
    ) -> Optional[Dict[int, int]]:
        """G read off a category isomorphism by transporting every connecting cone, or None."""
        b_r = SemigroupService.greens(b.full.semigroup).r_class
        b_classes = set(b.downset)
        class_map: Dict[int, int] = {}
        for (_, d), eps in a.connection.items():
            index = b.full.index.get(IsomorphismService.transport_cone(iso, a.full.cones[eps]))
            if index is None or int(b_r[index]) not in b_classes:
                return None
            if class_map.setdefault(d, int(b_r[index])) != int(b_r[index]):
                return None
        if len(set(class_map.values())) != len(a.downset) or len(a.downset) != len(b.downset):
            return None
        return class_map

    @staticmethod
    def from_category_iso(a: ConnectedCategory, b: ConnectedCategory, iso: CategoryIso) -> CCMorphism:
        """Complete a category isomorphism to a CC-isomorphism.

        Raises:
            IsoFailure: connecting cones do not transport onto the down-set,
                or the pair fails a CC-morphism check
        """
        class_map = FunctorService.transported_class_map(a, b, iso)
        if class_map is None:
            raise IsoFailure("connecting cones do not transport onto the target down-set")
        m = CCMorphism(a, b, iso.object_map, iso.morphism_map, class_map)
        report = FunctorService.cc_morphism_checks(m)
        report.extend(
            IsomorphismService.category_iso_report(a.category, b.category, iso.object_map, iso.morphism_map),
            prefix="iso.",
        )
        if not report.passed:
            raise IsoFailure(*_first_failure(report))
        return m

    @staticmethod
    def find_cc_iso(a: ConnectedCategory, b: ConnectedCategory) -> Optional[CCMorphism]:
        """Search for a CC-isomorphism a -> b."""

        def accept(iso: CategoryIso) -> bool:
            class_map = FunctorService.transported_class_map(a, b, iso)
            if class_map is None:
                return False
            m = CCMorphism(a, b, iso.object_map, iso.morphism_map, class_map)
            return FunctorService.cc_morphism_checks(m).passed

        iso = IsomorphismService.find_category_iso(a.category, b.category, accept=accept)
        if iso is None:
            return None
        return FunctorService.from_category_iso(a, b, iso)

    # ------------------------------------------------------------------
    # inverse semigroups and right regular bands

    @staticmethod
    def lr_isomorphism_for_inverse(S: FiniteSemigroup) -> Tuple[CategoryIso, CheckReport]:
        """r(e,u,f) ↦ l(e,u⁻¹,f) from 𝕃(S) to ℝ(S), with its verification report."""
        if not SemigroupService.is_inverse(S):
            raise IsoFailure("semigroup is not inverse", S.name)
        L = CategoryService.build_left_category(S)
        R = CategoryService.build_right_category(S)
        inverse = [SemigroupService.inverses(S, a)[0] for a in range(S.size)]
        object_map = tuple(R.object_of(e) for e in L.category.object_data)
        morphism_map = tuple(R.morphism(tr.e, inverse[tr.u], tr.f) for tr in L.category.morphism_data)
        report = IsomorphismService.category_iso_report(
            L.category, R.category, object_map, morphism_map, subject=f"L({S.name}) -> R({S.name})"
        )
        return CategoryIso(L.category, R.category, object_map, morphism_map), report

    @staticmethod
    def band_adjunction_check(
        B: FiniteSemigroup,
        target: Optional[ConnectedCategory] = None,
        phi: Optional[Sequence[int]] = None,
    ) -> CheckReport:
        """Unit of the adjunction between right regular bands and supported categories.

        Checks that every cone of Ĉ(𝕃(B)_ℜ) is idempotent and that, for
        φ: B -> E(Ĉ_𝔇) (indices of the target connection semigroup), the
        induced CC-morphism m_φ satisfies φ = ρ̄(B) then E(m_φ). Without a
        target, φ = ρ̄(B) into C(B) itself.
        """
        report = CheckReport(subject=f"adjunction at {B.name or 'B'}")
        report.add("band", SemigroupService.is_band(B))
        report.add("right_regular_band", SemigroupService.is_band(B) and SemigroupService.is_right_regular_band(B))
        if not report.passed:
            return report

        cc_b = FunctorService.functor_C(B)
        sub_b = ConnectedService.connection_semigroup(cc_b)
        loose = [i for i, cone in enumerate(sub_b.cones) if not ConeService.is_idempotent(cc_b.category, cone)]
        report.add("all_cones_idempotent", not loose, loose[:1])
        rho_b = FunctorService._principal_iso(B, cc_b)
        if target is None:
            target, phi = cc_b, rho_b
        elif phi is None:
            raise ValueError("A map into the target idempotents is required")
        phi = tuple(int(x) for x in phi)

        T = FunctorService.functor_S(target)
        E = set(SemigroupService.idempotents(T))
        report.add("target_idempotents_closed", all(T.mul(e, f) in E for e in E for f in E))
        rrb_bad = next(((e, f) for e in E for f in E if T.product(e, f, e) != T.mul(f, e)), None)
        report.add("target_idempotents_right_regular", rrb_bad is None, rrb_bad)
        report.add("map_into_idempotents", all(x in E for x in phi))
        witness = SemigroupService.homomorphism_witness(B, T, phi)
        report.add("map_is_homomorphism", witness is None, witness)
        if not report.passed:
            return report

        rt = FunctorService.roundtrip_category(target)
        m = FunctorService.compose(FunctorService.hom_to_cc(phi, B, T, source=cc_b, target=rt.source), rt)
        induced = FunctorService.cc_to_hom(m)
        bad = [B.labels[a] for a in range(B.size) if induced[rho_b[a]] != phi[a]]
        report.add("universal_triangle_commutes", not bad, bad[:1])
        return report

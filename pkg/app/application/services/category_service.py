"""Category service: categories with subobjects, normal factorization, 𝕃(S) and ℝ(S).

Composition is left to right throughout: ``fg`` means "f, then g".
"""

import logging
import weakref
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence

import numpy as np

from app.application.dto.check_dto import CheckReport
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import NoFactorization
from app.domain.entities.category import (
    FiniteCategory,
    LeftCategory,
    MorphismTriple,
    NormalFactorization,
)
from app.domain.entities.semigroup import FiniteSemigroup

logger = logging.getLogger(__name__)

_FACTORIZATIONS: "weakref.WeakKeyDictionary[FiniteCategory, Dict[int, Optional[NormalFactorization]]]" = (
    weakref.WeakKeyDictionary()
)
_ISOS: "weakref.WeakKeyDictionary[FiniteCategory, np.ndarray]" = weakref.WeakKeyDictionary()


class CategoryService:
    """Service for finite categories with subobjects."""

    @staticmethod
    def build_concrete(
        objects: Sequence[Hashable],
        hom: Callable[[Hashable, Hashable], Iterable[Hashable]],
        compose: Callable[[Hashable, Hashable], Hashable],
        identity: Callable[[Hashable], Hashable],
        inclusion: Callable[[Hashable, Hashable], Optional[Hashable]],
        object_label: Callable[[Hashable], str] = str,
        morphism_label: Callable[[Hashable], str] = str,
        name: str = "",
    ) -> FiniteCategory:
        """Tabulate a category whose morphisms are hashable payloads.

        Args:
            objects: Object payloads, in index order
            hom: Payloads of the morphisms a -> b
            compose: Left-to-right composite of two payloads
            identity: Identity payload of an object
            inclusion: Inclusion payload a -> b, or None when a is not below b
            object_label: Display name of an object payload
            morphism_label: Display name of a morphism payload
            name: Category name

        Returns:
            FiniteCategory carrying the payloads as object/morphism data
        """
        payloads: List[Hashable] = []
        dom: List[int] = []
        cod: List[int] = []
        for a_idx, a in enumerate(objects):
            for b_idx, b in enumerate(objects):
                for payload in hom(a, b):
                    payloads.append(payload)
                    dom.append(a_idx)
                    cod.append(b_idx)
        index = {payload: i for i, payload in enumerate(payloads)}
        if len(index) != len(payloads):
            raise ValueError("Morphism payloads must be distinct across hom-sets")
        m = len(payloads)
        dom_arr = np.asarray(dom, dtype=np.int64)
        cod_arr = np.asarray(cod, dtype=np.int64)
        table = np.full((m, m), -1, dtype=np.int64)
        for b in range(len(objects)):
            ins = np.flatnonzero(cod_arr == b)
            outs = np.flatnonzero(dom_arr == b)
            for f in ins:
                for g in outs:
                    table[f, g] = index[compose(payloads[f], payloads[g])]
        identities = [index[identity(a)] for a in objects]
        incl = np.full((len(objects), len(objects)), -1, dtype=np.int64)
        for a_idx, a in enumerate(objects):
            for b_idx, b in enumerate(objects):
                payload = inclusion(a, b)
                if payload is not None:
                    incl[a_idx, b_idx] = index[payload]
        category = FiniteCategory(
            dom=dom_arr,
            cod=cod_arr,
            compose=table,
            identities=np.asarray(identities, dtype=np.int64),
            inclusion=incl,
            object_labels=tuple(object_label(a) for a in objects),
            morphism_labels=tuple(morphism_label(p) for p in payloads),
            object_data=tuple(objects),
            morphism_data=tuple(payloads),
            name=name,
        )
        logger.debug(f"Built {category!r}", extra={"object_count": category.num_objects})
        return category

    @staticmethod
    def full_subcategory(C: FiniteCategory, objects: Sequence[int], name: str = "") -> FiniteCategory:
        """Full subcategory on the given objects, with inherited inclusions."""
        keep_objects = list(objects)
        obj_pos = {o: i for i, o in enumerate(keep_objects)}
        keep = [f for f in range(C.num_morphisms) if int(C.dom[f]) in obj_pos and int(C.cod[f]) in obj_pos]
        pos = {f: i for i, f in enumerate(keep)}
        # slot -1 of the lookup stays -1 so absent entries map to absent
        lookup = np.full(C.num_morphisms + 1, -1, dtype=np.int64)
        lookup[keep] = np.arange(len(keep))
        remapped = lookup[C.compose[np.ix_(keep, keep)]]
        incl = lookup[C.inclusion[np.ix_(keep_objects, keep_objects)]]
        return FiniteCategory(
            dom=[obj_pos[int(C.dom[f])] for f in keep],
            cod=[obj_pos[int(C.cod[f])] for f in keep],
            compose=remapped,
            identities=[pos[C.identity(o)] for o in keep_objects],
            inclusion=incl,
            object_labels=tuple(C.object_labels[o] for o in keep_objects),
            morphism_labels=tuple(C.morphism_labels[f] for f in keep),
            object_data=tuple(C.object_data[o] for o in keep_objects) if C.object_data else (),
            morphism_data=tuple(C.morphism_data[f] for f in keep) if C.morphism_data else (),
            name=name or f"sub({C.name})",
        )

    # ------------------------------------------------------------------
    # morphism classes

    @staticmethod
    def is_mono(C: FiniteCategory, m: int) -> bool:
        """Right cancellable: gm = hm implies g = h."""
        target = int(C.dom[m])
        for x in range(C.num_objects):
            maps = C.hom(x, target)
            if maps.size > 1 and np.unique(C.compose[maps, m]).size != maps.size:
                return False
        return True

    @staticmethod
    def is_epi(C: FiniteCategory, p: int) -> bool:
        """Left cancellable: pg = ph implies g = h."""
        source = int(C.cod[p])
        for y in range(C.num_objects):
            maps = C.hom(source, y)
            if maps.size > 1 and np.unique(C.compose[p, maps]).size != maps.size:
                return False
        return True

    @staticmethod
    def isomorphisms(C: FiniteCategory) -> np.ndarray:
        """Boolean mask of invertible morphisms."""
        cached = _ISOS.get(C)
        if cached is not None:
            return cached
        mask = np.zeros(C.num_morphisms, dtype=bool)
        for f in range(C.num_morphisms):
            a, b = int(C.dom[f]), int(C.cod[f])
            back = C.hom(b, a)
            if back.size:
                ok = (C.compose[f, back] == C.identity(a)) & (C.compose[back, f] == C.identity(b))
                mask[f] = bool(ok.any())
        mask.setflags(write=False)
        _ISOS[C] = mask
        return mask

    @staticmethod
    def is_iso(C: FiniteCategory, f: int) -> bool:
        return bool(CategoryService.isomorphisms(C)[f])

    @staticmethod
    def inverse_of(C: FiniteCategory, f: int) -> int:
        a, b = int(C.dom[f]), int(C.cod[f])
        for g in C.hom(b, a):
            if C.compose[f, g] == C.identity(a) and C.compose[g, f] == C.identity(b):
                return int(g)
        raise ValueError(f"Morphism {f} is not an isomorphism")

    @staticmethod
    def retractions(C: FiniteCategory, c: int, sub: int) -> List[int]:
        """Morphisms q: c -> sub with j(sub, c) q = 1."""
        j = int(C.inclusion[sub, c])
        if j < 0:
            return []
        return [int(q) for q in C.hom(c, sub) if C.compose[j, q] == C.identity(sub)]

    @staticmethod
    def is_retraction(C: FiniteCategory, q: int) -> bool:
        c, sub = int(C.dom[q]), int(C.cod[q])
        j = int(C.inclusion[sub, c])
        return j >= 0 and int(C.compose[j, q]) == C.identity(sub)

    # ------------------------------------------------------------------
    # axioms

    @staticmethod
    def category_law_failures(C: FiniteCategory) -> List[str]:
        """Typing, unit and associativity violations, as witness strings."""
        problems: List[str] = []
        cod_dom = C.cod[:, None] == C.dom[None, :]
        defined = C.compose >= 0
        if not np.array_equal(cod_dom, defined):
            f, g = np.argwhere(cod_dom != defined)[0]
            problems.append(f"composability of ({f},{g}) disagrees with dom/cod")
            return problems
        fs, gs = np.nonzero(defined)
        results = C.compose[fs, gs]
        bad = (C.dom[results] != C.dom[fs]) | (C.cod[results] != C.cod[gs])
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            problems.append(f"composite of ({fs[k]},{gs[k]}) has the wrong type")
        for f in range(C.num_morphisms):
            if C.compose[C.identity(int(C.dom[f])), f] != f or C.compose[f, C.identity(int(C.cod[f]))] != f:
                problems.append(f"identity law fails at {f}")
                break
        for f in range(C.num_morphisms):
            fg = C.compose[f]
            gs_f = np.flatnonzero(fg >= 0)
            if gs_f.size == 0:
                continue
            lhs = C.compose[fg[gs_f]]
            gh = C.compose[gs_f]
            rhs = np.where(gh >= 0, C.compose[f, np.maximum(gh, 0)], -1)
            diff = np.argwhere(lhs != rhs)
            if diff.size:
                g_pos, h = diff[0]
                problems.append(f"(fg)h != f(gh) for f={f}, g={gs_f[g_pos]}, h={h}")
                break
        return problems

    @staticmethod
    def verify_subobject_axioms(C: FiniteCategory) -> CheckReport:
        """Check the category laws and the axioms of a category with subobjects."""
        report = CheckReport(subject=C.name or "category")
        laws = CategoryService.category_law_failures(C)
        report.add("category_laws", not laws, "; ".join(laws))

        poset = C.poset
        report.add("preorder_is_partial_order", poset.is_partial_order())

        bad_identity = [a for a in range(C.num_objects) if int(C.inclusion[a, a]) != C.identity(a)]
        report.add("inclusion_of_object_is_identity", not bad_identity, bad_identity[:1])

        bad_chain = None
        n = C.num_objects
        for a in range(n):
            for b in range(n):
                if not C.leq[a, b]:
                    continue
                for c in range(n):
                    if C.leq[b, c] and int(C.compose[C.inclusion[a, b], C.inclusion[b, c]]) != int(C.inclusion[a, c]):
                        bad_chain = (a, b, c)
                        break
                if bad_chain:
                    break
            if bad_chain:
                break
        report.add("inclusions_compose", bad_chain is None, bad_chain)

        non_mono = [
            (a, b)
            for a in range(n)
            for b in range(n)
            if C.leq[a, b] and not CategoryService.is_mono(C, int(C.inclusion[a, b]))
        ]
        report.add("inclusions_are_monic", not non_mono, non_mono[:1])

        factoring = None
        for a in range(n):
            for c in range(n):
                if not C.leq[a, c]:
                    continue
                f = int(C.inclusion[a, c])
                for b in range(n):
                    if not C.leq[b, c]:
                        continue
                    g = int(C.inclusion[b, c])
                    for h in C.hom(a, b):
                        if int(C.compose[h, g]) == f and int(C.inclusion[a, b]) != int(h):
                            factoring = (int(h), g, f)
                            break
                    if factoring:
                        break
                if factoring:
                    break
            if factoring:
                break
        report.add("inclusion_factors_are_inclusions", factoring is None, factoring)
        return report

    @staticmethod
    def _factorize(C: FiniteCategory, f: int, reverse: bool = False) -> Optional[NormalFactorization]:
        c, d = int(C.dom[f]), int(C.cod[f])
        isos = CategoryService.isomorphisms(C)
        coimages = np.flatnonzero(C.leq[:, c])
        if reverse:
            coimages = coimages[::-1]
        images = np.flatnonzero(C.leq[:, d])
        for sub in coimages:
            sub = int(sub)
            g = int(C.compose[C.inclusion[sub, c], f])
            for q in CategoryService.retractions(C, c, sub):
                for image in images:
                    j = int(C.inclusion[image, d])
                    for u in C.hom(sub, int(image)):
                        if not isos[u] or int(C.compose[u, j]) != g:
                            continue
                        qu = int(C.compose[q, u])
                        if int(C.compose[qu, j]) == f:
                            return NormalFactorization(
                                morphism=f,
                                retraction=q,
                                isomorphism=int(u),
                                inclusion=j,
                                coimage=sub,
                                image=int(image),
                                epi_component=qu,
                            )
        return None

    @staticmethod
    def factorizations(C: FiniteCategory) -> Dict[int, Optional[NormalFactorization]]:
        """Least-coimage normal factorization of every morphism (None if absent)."""
        cached = _FACTORIZATIONS.get(C)
        if cached is None:
            cached = {f: CategoryService._factorize(C, f) for f in range(C.num_morphisms)}
            _FACTORIZATIONS[C] = cached
        return cached

    @staticmethod
    def normal_factorize(C: FiniteCategory, f: int, reverse: bool = False) -> NormalFactorization:
        """Normal factorization f = quj.

        The coimage is the least-index object admitting a factorization
        (the greatest when ``reverse`` is set); f° = qu does not depend on it.

        Raises:
            NoFactorization: f has no normal factorization
        """
        result = CategoryService._factorize(C, f, reverse) if reverse else CategoryService.factorizations(C)[f]
        if result is None:
            raise NoFactorization(f)
        return result

    @staticmethod
    def epi_component(C: FiniteCategory, f: int) -> int:
        return CategoryService.normal_factorize(C, f).epi_component

    @staticmethod
    def image(C: FiniteCategory, f: int) -> int:
        return CategoryService.normal_factorize(C, f).image

    @staticmethod
    def epi_component_rule_failures(C: FiniteCategory) -> List[tuple]:
        """Composable pairs with (fg)° != f°(j_f g)°."""
        failures = []
        fs, gs = np.nonzero(C.compose >= 0)
        for f, g in zip(fs.tolist(), gs.tolist()):
            nf = CategoryService.normal_factorize(C, f)
            jg = int(C.compose[nf.inclusion, g])
            expected = int(C.compose[nf.epi_component, CategoryService.epi_component(C, jg)])
            if CategoryService.epi_component(C, int(C.compose[f, g])) != expected:
                failures.append((f, g))
        return failures

    @staticmethod
    def factorization_uniqueness_failures(C: FiniteCategory) -> List[int]:
        """Morphisms whose f° or image depends on the coimage order."""
        failures = []
        for f in range(C.num_morphisms):
            forward = CategoryService.normal_factorize(C, f)
            backward = CategoryService.normal_factorize(C, f, reverse=True)
            if (forward.epi_component, forward.inclusion) != (backward.epi_component, backward.inclusion):
                failures.append(f)
        return failures

    @staticmethod
    def verify_normal(C: FiniteCategory, cap: Optional[int] = None) -> CheckReport:
        """Check the four normal-category axioms.

        The last axiom (an identity-component cone at every object) runs a
        cone search per object.
        """
        from app.application.services.cone_service import ConeService

        report = CategoryService.verify_subobject_axioms(C)
        report.subject = C.name or "category"

        unsplit = [
            (a, b)
            for a in range(C.num_objects)
            for b in range(C.num_objects)
            if C.leq[a, b] and not CategoryService.retractions(C, b, a)
        ]
        report.add("inclusions_split", not unsplit, unsplit[:1])

        unfactored = [f for f, nf in CategoryService.factorizations(C).items() if nf is None]
        report.add("normal_factorization_exists", not unfactored, unfactored[:1])

        missing_cone = []
        for c in range(C.num_objects):
            found = ConeService.find_cones(C, c, fixed={c: C.identity(c)}, limit=1, cap=cap)
            if not found:
                missing_cone.append(c)
        report.add("identity_cone_at_each_object", not missing_cone, missing_cone[:1])
        logger.info(
            f"Normality of {C!r}: {'passed' if report.passed else 'failed'}",
            extra={"object_count": C.num_objects, "check": "normal"},
        )
        return report

    # ------------------------------------------------------------------
    # principal-ideal categories

    @staticmethod
    def _principal_category(S: FiniteSemigroup, side: str) -> LeftCategory:
        SemigroupService.require_regular(S)
        base = S if side == "r" else SemigroupService.opposite(S)
        g = SemigroupService.greens(base)
        t = base.table
        canonical: Dict[int, int] = {}
        for e in g.idempotents:
            canonical[e] = g.idempotents_in(g.l_class, int(g.l_class[e]))[0]
        objects = sorted(set(canonical.values()))

        def hom(e, f):
            witnesses = np.unique(t[t[e, :], f])
            return [MorphismTriple(e, int(u), f, side) for u in witnesses]

        def compose(x: MorphismTriple, y: MorphismTriple) -> MorphismTriple:
            return MorphismTriple(x.e, int(t[x.u, y.u]), y.f, side)

        def inclusion(e, f):
            return MorphismTriple(e, e, f, side) if g.leq_l[e, f] else None

        if side == "r":
            object_label = lambda e: f"S{S.labels[e]}"
        else:
            object_label = lambda e: f"{S.labels[e]}S"
        category = CategoryService.build_concrete(
            objects=objects,
            hom=hom,
            compose=compose,
            identity=lambda e: MorphismTriple(e, e, e, side),
            inclusion=inclusion,
            object_label=object_label,
            morphism_label=lambda m: m.label(S.labels),
            name=f"{'L' if side == 'r' else 'R'}({S.name or 'S'})",
        )
        return LeftCategory(semigroup=S, category=category, canonical=canonical, side=side)

    @staticmethod
    def build_left_category(S: FiniteSemigroup) -> LeftCategory:
        """𝕃(S): objects Se, morphisms r(e,u,f) with u in eSf.

        Raises:
            NotRegular: S is not regular
        """
        return CategoryService._principal_category(S, "r")

    @staticmethod
    def build_right_category(S: FiniteSemigroup) -> LeftCategory:
        """ℝ(S): objects eS, morphisms l(e,u,f) with u in fSe, composed by l(e,u,f)l(f,v,h) = l(e,vu,h)."""
        return CategoryService._principal_category(S, "l")

    @staticmethod
    def left_category_checks(L: LeftCategory) -> CheckReport:
        """Structural identities of 𝕃(S): inclusions, their retractions, images and factorizations."""
        if L.side != "r":
            raise ValueError("Structural checks are stated for 𝕃(S); pass 𝕃(S^op) for ℝ(S)")
        S = L.semigroup
        C = L.category
        t = S.table
        g = SemigroupService.greens(S)
        report = CheckReport(subject=C.name)

        bad_inclusion = None
        bad_retraction = None
        for m in range(C.num_morphisms):
            tr = L.triple(m)
            expected = tr.u == tr.e and bool(g.leq_l[tr.e, tr.f])
            if C.is_inclusion(m) != expected:
                bad_inclusion = tr
            if expected and tr.e != tr.f:
                q = L.morphism(tr.f, int(t[tr.f, tr.e]), tr.e)
                if int(C.compose[m, q]) != C.identity(int(C.dom[m])):
                    bad_retraction = tr
        report.add("inclusion_iff_trivial_witness", bad_inclusion is None, bad_inclusion)
        report.add("inclusion_retraction", bad_retraction is None, bad_retraction)

        bad_image = None
        bad_factorization = None
        for m in range(C.num_morphisms):
            tr = L.triple(m)
            u = tr.u
            l_idem = g.idempotents_in(g.l_class, int(g.l_class[u]))
            r_idem = g.idempotents_in(g.r_class, int(g.r_class[u]))
            if CategoryService.image(C, m) != L.object_of(l_idem[0]):
                bad_image = tr
            below_e = [x for x in r_idem if g.nat_leq[x, tr.e]]
            if not below_e:
                bad_factorization = tr
                continue
            gx, h = below_e[0], l_idem[0]
            composite = C.comp(L.morphism(tr.e, gx, gx), L.morphism(gx, u, h), L.morphism(h, h, tr.f))
            if composite != m:
                bad_factorization = tr
        report.add("image_is_principal_ideal_of_witness", bad_image is None, bad_image)
        report.add("direct_factorization", bad_factorization is None, bad_factorization)
        return report

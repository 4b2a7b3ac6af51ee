"""Cone service: validation, composition and enumeration of cones.

The product of cones is γ·δ = γ ∗ (δ(z_γ))°, where γ ∗ f post-composes
every component of γ with f.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.application.dto.check_dto import CheckReport
from app.application.services.category_service import CategoryService
from app.application.services.semigroup_service import SemigroupService
from app.core.config import settings
from app.core.exceptions import NotRegular, SearchSpaceTooLarge
from app.domain.entities.category import FiniteCategory, LeftCategory
from app.domain.entities.cone import Cone, ConeSemigroup

logger = logging.getLogger(__name__)


class ConeService:
    """Service for cones and cone semigroups."""

    @staticmethod
    def is_cone(C: FiniteCategory, vertex: int, components: Sequence[int]) -> Tuple[bool, Optional[str]]:
        """Check both cone conditions exhaustively.

        Returns:
            (True, None) for a cone, otherwise (False, witness)
        """
        if len(components) != C.num_objects:
            return False, "one component per object is required"
        for c, m in enumerate(components):
            if int(C.dom[m]) != c or int(C.cod[m]) != vertex:
                return False, f"component at {c} is not a morphism {c} -> {vertex}"
        for a in range(C.num_objects):
            for b in range(C.num_objects):
                if a != b and C.leq[a, b] and int(C.compose[C.inclusion[a, b], components[b]]) != components[a]:
                    return False, f"j({a},{b})γ({b}) != γ({a})"
        isos = CategoryService.isomorphisms(C)
        if not any(isos[m] for m in components):
            return False, "no component is an isomorphism"
        return True, None

    @staticmethod
    def find_cones(
        C: FiniteCategory,
        vertex: int,
        fixed: Optional[Dict[int, int]] = None,
        limit: Optional[int] = None,
        cap: Optional[int] = None,
        counter: Optional[List[int]] = None,
    ) -> List[Cone]:
        """Backtracking search for cones with a given vertex.

        Objects are visited from maximal down; a component below an
        assigned object is forced by the inclusion, so only maximal objects
        branch.

        Args:
            C: Category
            vertex: Vertex object
            fixed: Components required at given objects
            limit: Stop after this many cones
            cap: Largest number of partial assignments (default: settings)
            counter: Shared one-element counter, for caps spanning several searches

        Raises:
            SearchSpaceTooLarge: the cap was exceeded
        """
        cap = settings.MAX_CONE_CANDIDATES if cap is None else cap
        counter = [0] if counter is None else counter
        fixed = fixed or {}
        isos = CategoryService.isomorphisms(C)
        order = C.poset.linear_extension(descending=True)
        uppers = {
            c: [b for b in range(C.num_objects) if b != c and C.leq[c, b]] for c in range(C.num_objects)
        }
        assignment = [-1] * C.num_objects
        found: List[Cone] = []

        def candidates(c: int) -> List[int]:
            ups = uppers[c]
            if ups:
                first = ups[0]
                forced = int(C.compose[C.inclusion[c, first], assignment[first]])
                for b in ups[1:]:
                    if int(C.compose[C.inclusion[c, b], assignment[b]]) != forced:
                        return []
                options = [forced]
            else:
                options = [int(m) for m in C.hom(c, vertex)]
            if c in fixed:
                options = [m for m in options if m == fixed[c]]
            return options

        def search(depth: int) -> bool:
            if depth == len(order):
                if any(isos[m] for m in assignment):
                    found.append(Cone(vertex, tuple(assignment)))
                    return limit is not None and len(found) >= limit
                return False
            c = order[depth]
            for m in candidates(c):
                counter[0] += 1
                if counter[0] > cap:
                    raise SearchSpaceTooLarge(cap)
                assignment[c] = m
                if search(depth + 1):
                    return True
            assignment[c] = -1
            return False

        search(0)
        return found

    @staticmethod
    def compose(C: FiniteCategory, gamma: Cone, delta: Cone) -> Cone:
        """γ·δ = γ ∗ (δ(z_γ))°."""
        p = CategoryService.epi_component(C, delta[gamma.vertex])
        return ConeService.star(C, gamma, p)

    @staticmethod
    def star(C: FiniteCategory, gamma: Cone, f: int) -> Cone:
        """γ ∗ f: every component of γ followed by f (f must start at the vertex)."""
        if int(C.dom[f]) != gamma.vertex:
            raise ValueError("γ ∗ f needs f to start at the vertex of γ")
        components = C.compose[list(gamma.components), f]
        return Cone(int(C.cod[f]), tuple(int(x) for x in components))

    @staticmethod
    def is_idempotent(C: FiniteCategory, gamma: Cone) -> bool:
        return gamma[gamma.vertex] == C.identity(gamma.vertex)

    @staticmethod
    def from_cones(
        C: FiniteCategory,
        cones: Sequence[Cone],
        parent: Optional[Sequence[int]] = None,
        name: str = "",
    ) -> ConeSemigroup:
        """Tabulate the product on a set of cones closed under it."""
        index = {cone: i for i, cone in enumerate(cones)}
        n = len(cones)
        table = np.empty((n, n), dtype=np.int64)
        for i, gamma in enumerate(cones):
            for k, delta in enumerate(cones):
                product = ConeService.compose(C, gamma, delta)
                if product not in index:
                    raise ValueError(f"Cone set is not closed under composition at ({i},{k})")
                table[i, k] = index[product]
        semigroup = SemigroupService.from_cayley_table(
            table,
            labels=[cone.label(C) for cone in cones],
            name=name or f"Ĉ({C.name or 'C'})",
            cap=max(n, settings.MAX_SEMIGROUP_SIZE),
        )
        return ConeSemigroup(
            category=C,
            cones=tuple(cones),
            semigroup=semigroup,
            parent=tuple(parent) if parent is not None else None,
        )

    @staticmethod
    def enumerate_cones(C: FiniteCategory, cap: Optional[int] = None) -> ConeSemigroup:
        """All cones of a normal category with their product table.

        Raises:
            SearchSpaceTooLarge: the candidate cap was exceeded
        """
        counter = [0]
        cones: List[Cone] = []
        for z in range(C.num_objects):
            cones.extend(ConeService.find_cones(C, z, cap=cap, counter=counter))
        cones.sort(key=lambda cone: (cone.vertex, cone.components))
        logger.info(
            f"Enumerated {len(cones)} cones of {C!r} after {counter[0]} partial assignments",
            extra={"cone_count": len(cones), "object_count": C.num_objects, "stage": "cones"},
        )
        return ConeService.from_cones(C, cones)

    @staticmethod
    def idempotent_with_vertex(hat: ConeSemigroup, z: int) -> int:
        """Least idempotent cone with vertex z."""
        C = hat.category
        for i, cone in enumerate(hat.cones):
            if cone.vertex == z and ConeService.is_idempotent(C, cone):
                return i
        raise ValueError(f"No idempotent cone with vertex {z}")

    @staticmethod
    def inverse_cone(hat: ConeSemigroup, i: int) -> int:
        """χ = μ ∗ γ(d)⁻¹ for μ idempotent at z_γ and γ(d) an isomorphism."""
        C = hat.category
        gamma = hat.cones[i]
        isos = CategoryService.isomorphisms(C)
        d = next(c for c, m in enumerate(gamma.components) if isos[m])
        mu = hat.cones[ConeService.idempotent_with_vertex(hat, gamma.vertex)]
        chi = ConeService.star(C, mu, CategoryService.inverse_of(C, gamma[d]))
        return hat.index[chi]

    @staticmethod
    def principal_cone(L: LeftCategory, a: int) -> Cone:
        """r^a: Se -> r(e, ea, f) with f the least idempotent of L_a.

        Raises:
            NotRegular: S is not regular
        """
        S = L.semigroup
        g = SemigroupService.greens(S)
        idempotents = g.idempotents_in(g.l_class, int(g.l_class[a]))
        if not idempotents:
            raise NotRegular(a)
        f = idempotents[0]
        C = L.category
        components = [L.morphism(e, S.mul(e, a), f) for e in C.object_data]
        return Cone(L.object_of(f), tuple(components))

    @staticmethod
    def principal_map(L: LeftCategory, hat: ConeSemigroup) -> List[int]:
        """ρ̄: index in ``hat`` of r^a for every element a."""
        result = []
        for a in range(L.semigroup.size):
            cone = ConeService.principal_cone(L, a)
            full_index = hat.index.get(cone)
            if full_index is None:
                raise ValueError(f"Principal cone of {a} is not among the enumerated cones")
            result.append(full_index)
        return result

    @staticmethod
    def cone_greens_check(hat: ConeSemigroup) -> CheckReport:
        """Compare vertex/epimorphism characterizations with table-derived Green's data.

        Covers: ≤ℓ by vertex order, ≤r by epimorphic components, the
        natural order on idempotents via retractions, the idempotency
        criterion, the explicit inverse, and γ ∗ f for epimorphisms f.
        """
        C = hat.category
        S = hat.semigroup
        g = SemigroupService.greens(S)
        report = CheckReport(subject=S.name)
        n = hat.size
        vertices = np.asarray([cone.vertex for cone in hat.cones])

        by_vertex = C.leq[vertices[:, None], vertices[None, :]]
        mismatch = np.argwhere(by_vertex != g.leq_l)
        report.add("left_order_is_vertex_order", mismatch.size == 0, mismatch[:1].tolist())

        right_mismatch = None
        for i in range(n):
            for k in range(n):
                gamma, delta = hat.cones[i], hat.cones[k]
                h = gamma[delta.vertex]
                predicted = CategoryService.is_epi(C, h) and ConeService.star(C, delta, h) == gamma
                if predicted != bool(g.leq_r[i, k]):
                    right_mismatch = (i, k)
                    break
            if right_mismatch:
                break
        report.add("right_order_is_epimorphic_factor", right_mismatch is None, right_mismatch)

        idem_mismatch = None
        for nu in g.idempotents:
            for mu in g.idempotents:
                component = hat.cones[nu][hat.cones[mu].vertex]
                predicted = CategoryService.is_retraction(C, component) and (
                    ConeService.star(C, hat.cones[mu], component) == hat.cones[nu]
                )
                if predicted != bool(g.nat_leq[nu, mu]):
                    idem_mismatch = (nu, mu)
        report.add("idempotent_order_is_retraction", idem_mismatch is None, idem_mismatch)

        flagged = {i for i, cone in enumerate(hat.cones) if ConeService.is_idempotent(C, cone)}
        report.add(
            "idempotent_iff_identity_at_vertex",
            flagged == set(g.idempotents),
            sorted(flagged ^ set(g.idempotents))[:1],
        )

        bad_inverse = None
        for i in range(n):
            x = ConeService.inverse_cone(hat, i)
            if S.product(i, x, i) != i or S.product(x, i, x) != x:
                bad_inverse = i
                break
        report.add("explicit_inverse", bad_inverse is None, bad_inverse)

        bad_star = None
        for gamma in hat.cones:
            for f in C.out_of(gamma.vertex):
                if CategoryService.is_epi(C, int(f)):
                    starred = ConeService.star(C, gamma, int(f))
                    if starred not in hat.index:
                        bad_star = (gamma.vertex, int(f))
                        break
            if bad_star:
                break
        report.add("star_with_epimorphism_is_cone", bad_star is None, bad_star)
        return report

    @staticmethod
    def associativity_failure(hat: ConeSemigroup) -> Optional[Tuple[int, int, int]]:
        """Recompute products cone by cone and look for a non-associative triple."""
        C = hat.category
        for a, x in enumerate(hat.cones):
            for b, y in enumerate(hat.cones):
                xy = ConeService.compose(C, x, y)
                for c, z in enumerate(hat.cones):
                    if ConeService.compose(C, xy, z) != ConeService.compose(C, x, ConeService.compose(C, y, z)):
                        return (a, b, c)
        return None

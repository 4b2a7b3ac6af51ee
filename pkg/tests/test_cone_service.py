"""Unit tests for cones and cone semigroups."""

import pytest

from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.functor_service import FunctorService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import SearchSpaceTooLarge
from app.infrastructure.formats.category_text import parse_category


@pytest.fixture
def base():
    return CatalogService.powerset_base(2)


@pytest.fixture
def trivial():
    return CategoryService.build_concrete(
        objects=["*"],
        hom=lambda a, b: ["1"],
        compose=lambda f, g: "1",
        identity=lambda a: "1",
        inclusion=lambda a, b: "1",
        name="trivial",
    )


class TestConeConditions:
    """Tests for recognising cones."""

    def test_inclusions_into_top(self, base):
        top = base.object_index[(0, 1)]
        components = [base.j(c, top) for c in range(base.num_objects)]
        assert ConeService.is_cone(base, top, components) == (True, None)

    def test_incompatible_components(self, base):
        top = base.object_index[(0, 1)]
        const = base.morphism_index[((0, 1), (0, 1), (0, 0))]
        ok, witness = ConeService.is_cone(base, top, [base.j(0, top), base.j(1, top), const])
        assert not ok
        assert witness.startswith("j(")

    def test_component_count(self, base):
        ok, witness = ConeService.is_cone(base, 2, [base.identity(2)])
        assert not ok
        assert "one component per object" in witness

    def test_find_cones_per_vertex(self, base):
        counts = [len(ConeService.find_cones(base, z)) for z in range(base.num_objects)]
        assert counts == [1, 1, 2]

    def test_search_cap(self, base):
        with pytest.raises(SearchSpaceTooLarge) as info:
            ConeService.enumerate_cones(base, cap=1)
        assert info.value.exit_code == 3


class TestConeSemigroups:
    """Tests for Ĉ."""

    def test_powerset_degree_two(self, base):
        hat = ConeService.enumerate_cones(base)
        assert hat.size == 4
        assert IsomorphismService.are_isomorphic(hat.semigroup, CatalogService.transformation_monoid(2))

    def test_powerset_degree_three(self):
        hat = CatalogService.build("P3").full
        assert hat.size == 27

    def test_trivial_category(self, trivial):
        hat = ConeService.enumerate_cones(trivial)
        assert hat.size == 1

    def test_two_object_category(self, two_object_text):
        C = parse_category(two_object_text)
        hat = ConeService.enumerate_cones(C)
        assert [cone.vertex for cone in hat.cones] == [0, 1]
        assert hat.table.tolist() == [[0, 0], [0, 1]]

    def test_idempotents_square_to_themselves(self, base):
        hat = ConeService.enumerate_cones(base)
        for cone in hat.cones:
            if ConeService.is_idempotent(base, cone):
                assert ConeService.compose(base, cone, cone) == cone

    def test_product_associative(self, base):
        hat = ConeService.enumerate_cones(base)
        assert ConeService.associativity_failure(hat) is None

    def test_explicit_inverse(self, base):
        hat = ConeService.enumerate_cones(base)
        S = hat.semigroup
        for i in range(hat.size):
            x = ConeService.inverse_cone(hat, i)
            assert S.product(i, x, i) == i
            assert S.product(x, i, x) == x

    def test_idempotent_with_vertex(self, base):
        hat = ConeService.enumerate_cones(base)
        for z in range(base.num_objects):
            i = ConeService.idempotent_with_vertex(hat, z)
            assert hat.vertex(i) == z

    def test_star_needs_matching_domain(self, base):
        hat = ConeService.enumerate_cones(base)
        gamma = hat.cones[0]
        wrong = base.identity((gamma.vertex + 1) % base.num_objects)
        with pytest.raises(ValueError):
            ConeService.star(base, gamma, wrong)

    def test_greens_coherence(self, base):
        report = ConeService.cone_greens_check(ConeService.enumerate_cones(base))
        assert report.passed, report.failures()

    def test_greens_coherence_trivial(self, trivial):
        assert ConeService.cone_greens_check(ConeService.enumerate_cones(trivial)).passed

    def test_left_classes_grouped_by_vertex(self, base):
        hat = ConeService.enumerate_cones(base)
        g = SemigroupService.greens(hat.semigroup)
        for i in range(hat.size):
            for k in range(hat.size):
                same_vertex = hat.vertex(i) == hat.vertex(k)
                assert same_vertex == (g.l_class[i] == g.l_class[k])


class TestPrincipalCones:
    """Tests for r^a."""

    def test_idempotent_gives_idempotent_cone(self, t2):
        cc = FunctorService.functor_C(t2)
        L = cc.source
        for e in SemigroupService.idempotents(t2):
            cone = ConeService.principal_cone(L, e)
            assert cone.vertex == L.object_of(e)
            assert ConeService.is_idempotent(L.category, cone)

    def test_swap_has_top_vertex(self, t2):
        cc = FunctorService.functor_C(t2)
        L = cc.source
        cone = ConeService.principal_cone(L, 2)
        assert L.category.object_labels[cone.vertex] == "S[1 2]"
        assert not ConeService.is_idempotent(L.category, cone)
        assert CategoryService.is_iso(L.category, cone[cone.vertex])

    def test_principal_map_is_homomorphism(self, t2):
        cc = FunctorService.functor_C(t2)
        rho = ConeService.principal_map(cc.source, cc.full)
        product = cc.full.semigroup
        for a in range(t2.size):
            for b in range(t2.size):
                assert product.mul(rho[a], rho[b]) == rho[t2.mul(a, b)]

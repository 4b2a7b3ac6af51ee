"""Unit tests for the category service."""

import pytest

from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.core.exceptions import NotRegular
from app.infrastructure.formats.category_text import parse_category


@pytest.fixture
def base():
    """Nonempty subsets of {1,2} with all maps."""
    return CatalogService.powerset_base(2)


def _morphism(C, source, target, images):
    return C.morphism_index[(source, target, images)]


class TestConcreteCategories:
    """Tests for tabulated categories."""

    def test_powerset_shape(self, base):
        assert base.object_labels == ("{1}", "{2}", "{1,2}")
        assert base.num_morphisms == 14
        assert base.hom(2, 2).size == 4
        assert CategoryService.category_law_failures(base) == []

    def test_inclusions_follow_subsets(self, base):
        single = base.object_index[(0,)]
        full = base.object_index[(0, 1)]
        assert base.leq[single, full]
        assert not base.leq[full, single]
        assert base.is_inclusion(base.j(single, full))

    def test_composition_left_to_right(self, base):
        swap = _morphism(base, (0, 1), (0, 1), (1, 0))
        const = _morphism(base, (0, 1), (0, 1), (0, 0))
        assert base.comp(swap, const) == const
        assert base.comp(const, swap) == _morphism(base, (0, 1), (0, 1), (1, 1))

    def test_full_subcategory(self, base):
        sub = CategoryService.full_subcategory(base, [0, 1])
        assert sub.num_objects == 2
        assert sub.num_morphisms == 4
        assert CategoryService.category_law_failures(sub) == []

    def test_duplicate_payloads_rejected(self):
        with pytest.raises(ValueError):
            CategoryService.build_concrete(
                objects=[0, 1],
                hom=lambda a, b: ["m"],
                compose=lambda f, g: "m",
                identity=lambda a: "m",
                inclusion=lambda a, b: None,
            )


class TestMorphismClasses:
    """Tests for monos, epis, isos and retractions."""

    def test_isomorphisms(self, base):
        isos = CategoryService.isomorphisms(base)
        assert int(isos.sum()) == 6

    def test_inverse_of_swap(self, base):
        swap = _morphism(base, (0, 1), (0, 1), (1, 0))
        assert CategoryService.inverse_of(base, swap) == swap

    def test_inverse_of_non_iso(self, base):
        const = _morphism(base, (0, 1), (0, 1), (0, 0))
        with pytest.raises(ValueError):
            CategoryService.inverse_of(base, const)

    def test_inclusion_is_mono_not_epi(self, base):
        j = base.j(0, 2)
        assert CategoryService.is_mono(base, j)
        assert not CategoryService.is_epi(base, j)

    def test_retraction(self, base):
        q = _morphism(base, (0, 1), (0,), (0, 0))
        assert CategoryService.is_retraction(base, q)
        assert CategoryService.is_epi(base, q)
        assert CategoryService.retractions(base, 2, 0) == [q]


class TestNormalFactorization:
    """Tests for f = quj."""

    def test_constant_map(self, base):
        const = _morphism(base, (0, 1), (0, 1), (0, 0))
        nf = CategoryService.normal_factorize(base, const)
        assert nf.coimage == 0
        assert nf.image == 0
        assert CategoryService.is_retraction(base, nf.retraction)
        assert CategoryService.is_iso(base, nf.isomorphism)
        assert base.is_inclusion(nf.inclusion)
        assert base.comp(nf.retraction, nf.isomorphism, nf.inclusion) == const

    def test_isomorphism_is_its_own_epi_component(self, base):
        swap = _morphism(base, (0, 1), (0, 1), (1, 0))
        assert CategoryService.epi_component(base, swap) == swap
        assert CategoryService.image(base, swap) == 2

    def test_epi_component_rule(self, base):
        assert CategoryService.epi_component_rule_failures(base) == []

    def test_factorization_independent_of_coimage(self, base):
        assert CategoryService.factorization_uniqueness_failures(base) == []


class TestNormality:
    """Tests for the normal-category axioms."""

    def test_powerset_normal(self, base):
        report = CategoryService.verify_normal(base)
        assert report.passed, report.failures()

    def test_empty_set_breaks_splitting(self):
        C = CatalogService.powerset_base(2, include_empty=True)
        report = CategoryService.verify_normal(C)
        assert not report.passed
        assert not report.get("inclusions_split").passed

    def test_two_object_text_category(self, two_object_text):
        C = parse_category(two_object_text)
        assert C.num_morphisms == 5
        assert CategoryService.verify_normal(C).passed

    def test_subobject_axioms(self, base):
        report = CategoryService.verify_subobject_axioms(base)
        assert report.passed
        assert report.get("inclusions_are_monic").passed


class TestPrincipalCategories:
    """Tests for 𝕃(S) and ℝ(S)."""

    def test_left_category_of_t2(self, t2):
        L = CategoryService.build_left_category(t2)
        assert L.category.num_objects == 3
        assert L.category.object_labels == ("S[1 1]", "S[1 2]", "S[2 2]")
        assert CategoryService.verify_normal(L.category).passed

    def test_right_category_of_t2(self, t2):
        R = CategoryService.build_right_category(t2)
        assert R.category.num_objects == 2
        assert R.category.object_labels[0].endswith("S")

    def test_group_has_one_object(self, named):
        L = CategoryService.build_left_category(named["Z2"])
        assert L.category.num_objects == 1
        assert L.category.hom(0, 0).size == 2

    def test_left_category_checks(self, t2, i2):
        for S in (t2, i2):
            report = CategoryService.left_category_checks(CategoryService.build_left_category(S))
            assert report.passed, report.failures()

    def test_checks_refuse_right_category(self, t2):
        with pytest.raises(ValueError):
            CategoryService.left_category_checks(CategoryService.build_right_category(t2))

    def test_morphism_triples(self, t2):
        L = CategoryService.build_left_category(t2)
        for m in range(L.category.num_morphisms):
            tr = L.triple(m)
            assert t2.product(tr.e, tr.u, tr.f) == tr.u

    def test_non_regular_rejected(self):
        from app.application.services.semigroup_service import SemigroupService

        S = SemigroupService.from_cayley_table([[0, 0], [0, 0]])
        with pytest.raises(NotRegular):
            CategoryService.build_left_category(S)

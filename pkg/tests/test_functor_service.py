"""Unit tests for the functors C and S and CC-morphisms."""

import pytest

from app.application.services.catalog_service import CatalogService
from app.application.services.functor_service import FunctorService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import CCConditionViolated, IsoFailure, NotHomomorphism, NotLeftReductive


class TestFunctorC:
    """Tests for S ↦ 𝕃(S)_ℜ."""

    def test_transformations_of_degree_two(self, t2):
        cc = FunctorService.functor_C(t2)
        assert cc.category.num_objects == 3
        assert len(cc.downset) == 2
        assert sorted(cc.class_labels.values()) == ["R[[1 1]]", "R[[1 2]]"]

    def test_cached_per_semigroup(self, t2):
        assert FunctorService.functor_C(t2) is FunctorService.functor_C(t2)

    def test_left_zero_band_refused(self, named):
        with pytest.raises(NotLeftReductive) as info:
            FunctorService.functor_C(named["L2"])
        assert info.value.exit_code == 1

    def test_principal_indices_cover_semigroup(self, t2):
        cc = FunctorService.functor_C(t2)
        assert len(FunctorService.principal_indices(cc)) == t2.size

    def test_principal_indices_need_source(self, p2):
        with pytest.raises(ValueError):
            FunctorService.principal_indices(p2)


class TestSemigroupRoundtrip:
    """Tests for S ≅ Ĉ(𝕃(S)_ℜ)."""

    @pytest.mark.parametrize("name", ["T2", "I2", "ST3"])
    def test_catalog_semigroups(self, name):
        S = CatalogService.build(name)
        iso = FunctorService.roundtrip_semigroup(S)
        assert iso.is_bijective
        assert iso.target.size == S.size

    @pytest.mark.slow
    def test_degree_three_transformations(self, t3):
        iso = FunctorService.roundtrip_semigroup(t3)
        assert iso.target.size == 27

    @pytest.mark.parametrize("name", ["Z2", "SL2", "R2", "RRB3", "B4"])
    def test_named_semigroups(self, named, name):
        S = named[name]
        iso = FunctorService.roundtrip_semigroup(S)
        assert SemigroupService.homomorphism_witness(S, iso.target, iso.mapping) is None

    def test_right_reductive_through_dual(self, named):
        S = named["L2Z"]
        iso = FunctorService.roundtrip_semigroup_dual(S)
        assert iso.is_bijective
        assert SemigroupService.homomorphism_witness(S, iso.target, iso.mapping) is None

    def test_dual_roundtrip_refuses_left_zero_opposite(self, named):
        """R2 is not right reductive, so its opposite has no functor C."""
        with pytest.raises(NotLeftReductive):
            FunctorService.roundtrip_semigroup_dual(named["R2"])


class TestCategoryRoundtrip:
    """Tests for 𝕃(Ĉ_𝔇) ≅ (C, 𝔇)."""

    def test_powerset_degree_two(self, p2):
        m = FunctorService.roundtrip_category(p2)
        assert m.target is p2
        assert m.is_bijective

    def test_left_category_of_t2(self, t2):
        cc = FunctorService.functor_C(t2)
        m = FunctorService.roundtrip_category(cc)
        assert FunctorService.cc_morphism_checks(m).passed

    def test_trivial_semigroup(self):
        S = SemigroupService.from_cayley_table([[0]], name="one")
        cc = FunctorService.functor_C(S)
        m = FunctorService.roundtrip_category(cc)
        assert m.object_map == (0,)

    def test_partial_bijections(self):
        m = FunctorService.roundtrip_category(CatalogService.build("X2"))
        assert m.is_bijective


class TestCCMorphisms:
    """Tests for identity, composite and broken CC-morphisms."""

    def test_identity_passes_checks(self, p2):
        report = FunctorService.cc_morphism_checks(FunctorService.identity(p2))
        assert report.passed, report.failures()

    def test_identity_induces_identity(self, p2):
        phi = FunctorService.cc_to_hom(FunctorService.identity(p2))
        assert phi.mapping == tuple(range(FunctorService.functor_S(p2).size))

    def test_compose_identities(self, p2):
        one = FunctorService.identity(p2)
        both = FunctorService.compose(one, one)
        assert both.object_map == one.object_map
        assert both.morphism_map == one.morphism_map
        assert both.class_map == one.class_map

    def test_class_swap_breaks_connection(self):
        m = CatalogService.broken_connection_morphism()
        assert not FunctorService.cc_morphism_checks(m).passed
        with pytest.raises(CCConditionViolated) as info:
            FunctorService.cc_to_hom(m)
        assert info.value.exit_code == 1

    def test_find_iso_to_left_category(self, p2, t2):
        m = FunctorService.find_cc_iso(p2, FunctorService.functor_C(t2))
        assert m is not None
        assert m.is_bijective

    def test_no_iso_between_different_sizes(self, p2, named):
        assert FunctorService.find_cc_iso(p2, FunctorService.functor_C(named["Z2"])) is None


class TestHomomorphismsToMorphisms:
    """Tests for φ ↦ m_φ and m ↦ φ_m."""

    def test_band_projection(self):
        B, SL2, phi = CatalogService.band_projection()
        m = FunctorService.hom_to_cc(phi, B, SL2)
        assert FunctorService.cc_morphism_checks(m).passed
        induced = FunctorService.cc_to_hom(m)
        assert induced.source.size == B.size
        assert induced.target.size == SL2.size

    def test_naturality_of_projection(self):
        B, SL2, phi = CatalogService.band_projection()
        report = FunctorService.naturality_check(phi, B, SL2)
        assert report.passed, report.failures()

    def test_identity_homomorphism(self, t2):
        m = FunctorService.hom_to_cc(range(t2.size), t2, t2)
        assert m.object_map == tuple(range(m.source.category.num_objects))
        assert FunctorService.naturality_check(range(t2.size), t2, t2).passed

    def test_not_a_homomorphism(self, t2, named):
        with pytest.raises(NotHomomorphism) as info:
            FunctorService.hom_to_cc((1, 0, 1, 1), t2, named["SL2"])
        assert info.value.pair == (2, 2)


class TestInverseSemigroups:
    """Tests for 𝕃(S) ≅ ℝ(S) on inverse semigroups."""

    def test_symmetric_inverse_monoid(self, i2):
        iso, report = FunctorService.lr_isomorphism_for_inverse(i2)
        assert report.passed, report.failures()
        assert len(set(iso.object_map)) == len(iso.object_map)

    def test_group(self, named):
        _, report = FunctorService.lr_isomorphism_for_inverse(named["Z2"])
        assert report.passed

    def test_not_inverse(self, t2):
        with pytest.raises(IsoFailure):
            FunctorService.lr_isomorphism_for_inverse(t2)


class TestBandAdjunction:
    """Tests for the unit of the band adjunction."""

    @pytest.mark.parametrize("name", ["R2", "SL2", "RRB3", "B4"])
    def test_unit_into_own_category(self, named, name):
        report = FunctorService.band_adjunction_check(named[name])
        assert report.passed, report.failures()
        assert report.get("all_cones_idempotent").passed

    def test_semilattice_into_powerset(self):
        B, cc, phi = CatalogService.semilattice_into_powerset()
        report = FunctorService.band_adjunction_check(B, cc, phi)
        assert report.passed, report.failures()
        assert report.get("universal_triangle_commutes").passed

    def test_target_needs_map(self, named, p2):
        with pytest.raises(ValueError):
            FunctorService.band_adjunction_check(named["SL2"], p2)

    def test_non_band_reported(self, named):
        report = FunctorService.band_adjunction_check(named["Z2"])
        assert not report.passed
        assert not report.get("band").passed

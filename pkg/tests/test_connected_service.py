"""Unit tests for connected categories."""

import dataclasses

import numpy as np
import pytest

from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.application.services.connected_service import ConnectedService
from app.application.services.functor_service import FunctorService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import (
    IndexOutOfRange,
    NotDownClosed,
    NotInConnectionSemigroup,
    NotSupported,
    ObjectNotConnected,
)


class TestCheckConnected:
    """Tests for validating down-sets."""

    def test_powerset_connected_by_partitions(self, p2):
        assert p2.downset == (0, 1)
        assert p2.class_labels == {0: "{{1,2}}", 1: "{{1},{2}}"}
        assert ConnectedService.connected_checks(p2).passed

    def test_missing_lower_class(self, p2):
        with pytest.raises(NotDownClosed):
            ConnectedService.check_connected(p2.category, p2.full, [1])

    def test_unconnected_object(self, p2):
        with pytest.raises(ObjectNotConnected) as info:
            ConnectedService.check_connected(p2.category, p2.full, [0])
        assert info.value.exit_code == 1

    def test_unknown_class(self, p2):
        with pytest.raises(IndexOutOfRange):
            ConnectedService.check_connected(p2.category, p2.full, [0, 1, 5])

    def test_connect_fully(self, two_object_text):
        from app.infrastructure.formats.category_text import parse_category

        cc = ConnectedService.connect_fully(parse_category(two_object_text))
        assert len(cc.downset) == 2
        assert ConnectedService.connection_semigroup(cc).size == 2

    def test_left_category_of_t2(self, t2):
        cc = FunctorService.functor_C(t2)
        assert len(cc.downset) == 2
        assert ConnectedService.connected_checks(cc).passed


class TestConnectionSemigroup:
    """Tests for Ĉ_𝔇."""

    def test_full_downset_keeps_every_cone(self, p2):
        sub = ConnectedService.connection_semigroup(p2)
        assert sub.size == p2.full.size == 4
        assert sub.parent == (0, 1, 2, 3)

    def test_cached(self, p2):
        assert ConnectedService.connection_semigroup(p2) is ConnectedService.connection_semigroup(p2)

    def test_left_category_of_t2_recovers_order(self, t2):
        sub = ConnectedService.connection_semigroup(FunctorService.functor_C(t2))
        assert IsomorphismService.are_isomorphic(sub.semigroup, t2)

    def test_regular_and_left_reductive(self, p2):
        S = FunctorService.functor_S(p2)
        assert SemigroupService.is_regular(S)
        assert SemigroupService.is_left_reductive(S)


class TestDecompositions:
    """Tests for γ = ε ∗ u and γ = ε ∗ p."""

    def test_idempotent_decomposes_trivially(self, p2):
        top = p2.category.object_index[(0, 1)]
        eps = p2.epsilon(top, 1)
        assert ConnectedService.decompose(p2, eps) == (eps, p2.category.identity(top))

    def test_least_connected_object_chosen(self, p2):
        assert ConnectedService.decompose(p2, 0) == (0, p2.category.identity(0))

    def test_decompositions_not_unique(self, p2):
        """Both singletons give a decomposition of the constant cone."""
        assert len(ConnectedService.decompositions(p2, 0)) == 2

    def test_every_cone_has_epi_decomposition(self, p2):
        for i in range(p2.full.size):
            for eps, p in ConnectedService.epi_decompositions(p2, i):
                assert CategoryService.is_epi(p2.category, p)
            assert ConnectedService.epi_decompositions(p2, i)

    def test_cone_outside_downset(self, p2):
        lower = dataclasses.replace(
            p2,
            downset=(0,),
            connection={key: eps for key, eps in p2.connection.items() if key[1] == 0},
        )
        top_cone = next(i for i in range(p2.full.size) if ConnectedService.r_class_of(p2, i) == 1)
        assert not ConnectedService.member_of(lower, top_cone)
        with pytest.raises(NotInConnectionSemigroup):
            ConnectedService.decompose(lower, top_cone)

    def test_epi_closure(self, p2):
        assert ConnectedService.epi_closure_failures(p2) == []


class TestSupport:
    """Tests for supported and self-supported categories."""

    def test_powerset_degree_two_supported(self, p2):
        assert ConnectedService.is_supported(p2)
        assert ConnectedService.support_map(p2).assignment == (0, 0, 1)
        assert not ConnectedService.is_self_supported(p2)

    def test_powerset_degree_three_not_supported(self):
        cc = CatalogService.build("P3")
        assert not ConnectedService.is_supported(cc)
        with pytest.raises(NotSupported):
            ConnectedService.support_map(cc)

    def test_symmetric_inverse_monoid_self_supported(self, i2):
        cc = FunctorService.functor_C(i2)
        assert ConnectedService.is_supported(cc)
        assert ConnectedService.is_self_supported(cc)
        assert SemigroupService.idempotents_commute(FunctorService.functor_S(cc))

    def test_right_regular_band_not_self_supported(self, named):
        cc = FunctorService.functor_C(named["RRB3"])
        assert ConnectedService.is_supported(cc)
        assert not ConnectedService.is_self_supported(cc)
        report = ConnectedService.supported_checks(cc)
        assert report.passed, report.failures()

    def test_group_self_supported(self, named):
        cc = FunctorService.functor_C(named["Z2"])
        assert ConnectedService.is_self_supported(cc)

    def test_partial_bijections_self_supported(self):
        cc = CatalogService.build("X2")
        assert ConnectedService.is_self_supported(cc)


class TestBoundedAbove:
    """Tests for largest objects and ε_k."""

    def test_powerset_has_top(self, p2):
        assert ConnectedService.is_bounded_above(p2.category) == p2.category.object_index[(0, 1)]
        assert ConnectedService.bounded_above_identity(p2) is not None

    def test_singular_powerset_has_no_top(self):
        cc = CatalogService.build("SP2")
        assert ConnectedService.is_bounded_above(cc.category) is None
        assert ConnectedService.bounded_above_identity(cc) is None

    def test_monoid_left_category(self, t2):
        cc = FunctorService.functor_C(t2)
        top = ConnectedService.is_bounded_above(cc.category)
        assert cc.category.object_labels[top] == "S[1 2]"
        identity = ConnectedService.bounded_above_identity(cc)
        assert FunctorService.functor_S(cc).monoid_identity == identity


class TestDuality:
    """Tests for the dual connection semigroup."""

    def test_dual_is_opposite(self, p2):
        dual = ConnectedService.dual_connection_semigroup(p2)
        sub = ConnectedService.connection_semigroup(p2)
        assert np.array_equal(dual.table, sub.table.T)

    def test_dual_is_right_reductive(self, p2):
        dual = ConnectedService.dual_connection_semigroup(p2)
        assert SemigroupService.is_right_reductive(dual)
        assert IsomorphismService.are_isomorphic(dual, SemigroupService.opposite(CatalogService.build("T2")))

    def test_dual_keeps_idempotents(self, p2):
        dual = ConnectedService.dual_connection_semigroup(p2)
        assert SemigroupService.idempotents(dual) == SemigroupService.idempotents(FunctorService.functor_S(p2))

    def test_reductivity_swaps(self, p2):
        dual = ConnectedService.dual_connection_semigroup(p2)
        original = FunctorService.functor_S(p2)
        assert SemigroupService.is_left_reductive(dual) == SemigroupService.is_right_reductive(original)

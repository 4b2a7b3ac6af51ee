"""Unit tests for isomorphism search."""

import numpy as np
import pytest

from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.config import apply_overrides
from app.core.exceptions import CapExceeded


class TestSemigroupIsomorphisms:
    """Tests for semigroup (anti-)isomorphisms."""

    def test_relabelled_table(self, named):
        Z2 = named["Z2"]
        swapped = SemigroupService.from_cayley_table([[1, 0], [0, 1]])
        iso = IsomorphismService.find_semigroup_iso(Z2, swapped)
        assert iso is not None
        assert iso.mapping == (1, 0)

    def test_left_and_right_zero_not_isomorphic(self, named):
        assert IsomorphismService.find_semigroup_iso(named["L2"], named["R2"]) is None

    def test_left_and_right_zero_anti_isomorphic(self, named):
        iso = IsomorphismService.find_semigroup_iso(named["L2"], named["R2"], anti=True)
        assert iso is not None
        assert iso.anti

    def test_different_orders(self, t2, named):
        assert not IsomorphismService.are_isomorphic(t2, named["Z2"])

    def test_inverse_witness(self, t3):
        perm = list(range(t3.size))
        perm[1], perm[5] = perm[5], perm[1]
        table = np.empty_like(t3.table)
        for a in range(t3.size):
            for b in range(t3.size):
                table[perm[a], perm[b]] = perm[int(t3.table[a, b])]
        shuffled = SemigroupService.from_cayley_table(table.tolist())
        iso = IsomorphismService.find_semigroup_iso(t3, shuffled)
        assert iso is not None
        back = iso.inverse()
        assert SemigroupService.homomorphism_witness(shuffled, t3, back.mapping) is None

    def test_generating_set_generates(self, t3):
        gens = IsomorphismService.generating_set(t3)
        assert len(gens) < t3.size
        closed = set(gens)
        while True:
            grown = closed | {int(t3.table[a, b]) for a in closed for b in closed}
            if grown == closed:
                break
            closed = grown
        assert closed == set(range(t3.size))

    def test_invariants_shape(self, t2):
        inv = IsomorphismService.semigroup_invariants(t2)
        assert inv.shape == (4, 6)
        assert inv[:, 0].tolist() == [1, 1, 0, 1]


class TestPosetIsomorphisms:
    """Tests for order isomorphisms."""

    def test_r_class_posets(self, t2):
        P = SemigroupService.quotient_poset_R(t2)
        assert IsomorphismService.find_poset_iso(P, P) == {0: 0, 1: 1}

    def test_chain_and_antichain(self, t2):
        chain = SemigroupService.quotient_poset_R(t2)
        antichain = SemigroupService.quotient_poset_R(SemigroupService.from_cayley_table([[0, 0], [1, 1]]))
        assert IsomorphismService.find_poset_iso(chain, antichain) is None


class TestCategoryIsomorphisms:
    """Tests for category isomorphism search and reports."""

    def test_powerset_and_left_category(self, t2):
        base = CatalogService.powerset_base(2)
        L = CategoryService.build_left_category(t2).category
        iso = IsomorphismService.find_category_iso(base, L)
        assert iso is not None
        report = IsomorphismService.category_iso_report(base, L, iso.object_map, iso.morphism_map)
        assert report.passed, report.failures()

    def test_identity_report(self):
        base = CatalogService.powerset_base(2)
        report = IsomorphismService.functor_report(
            base, base, range(base.num_objects), range(base.num_morphisms)
        )
        assert [check.name for check in report.checks] == [
            "preserves_domains",
            "preserves_identities",
            "preserves_composition",
            "preserves_inclusions",
        ]
        assert report.passed

    def test_constant_functor_not_bijective(self):
        base = CatalogService.powerset_base(2)
        obj = [0] * base.num_objects
        mor = [base.identity(0)] * base.num_morphisms
        report = IsomorphismService.category_iso_report(base, base, obj, mor)
        assert not report.get("objects_bijective").passed
        assert not report.get("morphisms_bijective").passed

    def test_object_bijections_respect_order(self):
        base = CatalogService.powerset_base(2)
        bijections = list(IsomorphismService.object_bijections(base, base))
        assert len(bijections) == 2
        assert all(b[2] == 2 for b in bijections)

    def test_cap_on_objects(self):
        base = CatalogService.powerset_base(2)
        apply_overrides(MAX_ISO_OBJECTS=2)
        with pytest.raises(CapExceeded) as info:
            IsomorphismService.find_category_iso(base, base)
        assert info.value.exit_code == 3

    def test_different_sizes(self):
        assert (
            IsomorphismService.find_category_iso(
                CatalogService.powerset_base(2), CatalogService.powerset_base(3)
            )
            is None
        )

    def test_transported_cones_stay_cones(self, t2):
        base = CatalogService.powerset_base(2)
        L = CategoryService.build_left_category(t2).category
        iso = IsomorphismService.find_category_iso(base, L)
        for cone in ConeService.enumerate_cones(base).cones:
            image = IsomorphismService.transport_cone(iso, cone)
            assert ConeService.is_cone(L, image.vertex, list(image.components))[0]

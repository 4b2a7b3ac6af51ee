"""Property-based tests on random transformation semigroups."""

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from app.application.services.catalog_service import bell, set_partitions
from app.application.services.functor_service import FunctorService
from app.application.services.semigroup_service import SemigroupService


def _compose(x, y):
    return tuple(y[v] for v in x)


maps = st.tuples(*[st.integers(0, 2)] * 3)
generator_sets = st.lists(maps, min_size=1, max_size=3, unique=True)

relaxed = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _semigroup(generators):
    elements = SemigroupService.closure(generators, _compose)
    return SemigroupService.from_elements(elements, _compose, name="gen")


@relaxed
@given(generator_sets)
def test_greens_classes_are_mutual_orders(generators):
    S = _semigroup(generators)
    g = SemigroupService.greens(S)
    same_l = g.l_class[:, None] == g.l_class[None, :]
    assert np.array_equal(same_l, g.leq_l & g.leq_l.T)
    same_r = g.r_class[:, None] == g.r_class[None, :]
    assert np.array_equal(same_r, g.leq_r & g.leq_r.T)


@relaxed
@given(generator_sets)
def test_h_classes_refine_l_and_r(generators):
    g = SemigroupService.greens(_semigroup(generators))
    assert g.num_h >= max(g.num_l, g.num_r)
    assert g.num_d <= min(g.num_l, g.num_r)


@relaxed
@given(generator_sets)
def test_regular_elements_have_inverses(generators):
    S = _semigroup(generators)
    for a in range(S.size):
        regular = any(S.product(a, x, a) == a for x in range(S.size))
        assert regular == bool(SemigroupService.inverses(S, a))


@relaxed
@given(generator_sets)
def test_flags_never_contradict(generators):
    assert SemigroupService.classify(_semigroup(generators)).inconsistencies() == []


@relaxed
@given(generator_sets)
def test_roundtrip_on_regular_left_reductive(generators):
    S = _semigroup(generators)
    if not (SemigroupService.is_regular(S) and SemigroupService.is_left_reductive(S)):
        return
    iso = FunctorService.roundtrip_semigroup(S)
    assert iso.is_bijective
    assert SemigroupService.homomorphism_witness(S, iso.target, iso.mapping) is None


@relaxed
@given(generator_sets)
def test_ladders_agree(generators):
    S = _semigroup(generators)
    if not SemigroupService.is_regular(S):
        return
    assert len(set(SemigroupService.l_unipotent_ladder(S).values())) == 1
    assert len(set(SemigroupService.inverse_ladder(S).values())) == 1


@given(st.integers(0, 6))
def test_partitions_counted_by_bell(n):
    assert len(set_partitions(n)) == bell(n)

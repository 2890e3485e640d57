import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsmax import (
    CoverageFunction,
    ExplicitFunction,
    ModularFunction,
    OutOfDomainError,
    check_exhaustive,
    check_monotone_submodular,
    full_mask,
    greedy,
    mask_of,
    min_of_family,
    restrict,
)
from rsmax.oracle import SubmodularOracle

from conftest import random_coverage_fn, random_modular


def test_modular_eval():
    f = ModularFunction([3, 1, 2])
    assert f(mask_of([0, 2])) == 5
    assert f(0) == 0
    assert f(full_mask(3)) == 6


def test_coverage_eval_union():
    f = CoverageFunction([(0, 1), (1,)], universe=2)
    assert f(mask_of([0, 1])) == 2
    assert f(mask_of([1])) == 1
    assert f(0) == 0


def test_empty_set_is_zero():
    fs = [
        ModularFunction([1, 2]),
        CoverageFunction([(0,), (1,)], universe=2),
        ExplicitFunction([0.0, 1.0, 1.0, 2.0]),
    ]
    for f in fs:
        assert f(0) == 0.0


def test_out_of_domain_rejected():
    f = ModularFunction([1, 1])
    with pytest.raises(OutOfDomainError):
        f(1 << 2)
    with pytest.raises(OutOfDomainError):
        f(-1)


def test_query_counter_increments_per_eval():
    f = ModularFunction([1, 2, 3])
    assert f.query_count == 0
    f(0b001)
    f(0b010)
    f(0b111)
    assert f.query_count == 3


def test_marginal_costs_two_queries_even_when_contained():
    f = ModularFunction([3, 1, 2])
    assert f.marginal(mask_of([1]), mask_of([0])) == 1
    q = f.query_count
    assert f.marginal(mask_of([0]), mask_of([0, 2])) == 0
    assert f.query_count == q + 2


def test_marginal_duplicate_coverage():
    f = CoverageFunction([(0,), (0,)], universe=1)
    assert f.marginal(mask_of([1]), mask_of([0])) == 0


def test_restrict_values_and_forwarding():
    f = ModularFunction([3, 1, 2])
    h = restrict(f, mask_of([0]))
    assert h(mask_of([1, 2])) == 3
    # restriction queries are charged to the base oracle
    assert h.query_count == f.query_count > 0


def test_restrict_empty_is_identity_exhaustive():
    rng = np.random.default_rng(1)
    f = random_coverage_fn(rng, 10, 14)
    h = restrict(f, 0)
    for mask in range(1 << 10):
        assert h(mask) == f(mask)


def test_restrict_already_covered():
    f = CoverageFunction([(0, 1), (1,)], universe=2)
    h = restrict(f, mask_of([0]))
    assert h(mask_of([1])) == 0


def test_restrict_definition_identity_sampled(rng):
    f = random_coverage_fn(rng, 12, 16)
    S = mask_of([2, 5, 7])
    h = restrict(f, S)
    for _ in range(200):
        A = int(rng.integers(0, 1 << 12))
        assert h(A) + f(S) == pytest.approx(f(A | S), abs=1e-12)


def test_min_of_family_values():
    f1 = ModularFunction([1, 0])
    f2 = ModularFunction([0, 1])
    h = min_of_family([f1, f2])
    assert h(mask_of([0])) == 0
    assert h(mask_of([0, 1])) == 1
    single = min_of_family([f1])
    for mask in range(4):
        assert single(mask) == f1(mask)


def test_min_of_family_rejected_where_submodular_required():
    h = min_of_family([ModularFunction([1, 0]), ModularFunction([0, 1])])
    assert not isinstance(h, SubmodularOracle)
    with pytest.raises(TypeError):
        greedy(h, full_mask(2), 1)


def test_min_of_family_validation():
    with pytest.raises(ValueError):
        min_of_family([])
    with pytest.raises(ValueError):
        min_of_family([ModularFunction([1]), ModularFunction([1, 2])])


def test_min_of_family_query_accounting():
    f1 = ModularFunction([1, 0])
    f2 = ModularFunction([0, 1])
    h = min_of_family([f1, f2])
    h(0b11)
    assert f1.query_count == f2.query_count == 1
    assert h.query_count == 2


def test_clone_has_fresh_counter():
    f = ModularFunction([1, 2])
    f(0b11)
    g = f.clone()
    assert g.query_count == 0
    assert g(0b11) == f(0b11)
    assert f.query_count == 2  # one original call plus the comparison call


def test_explicit_function_validation():
    with pytest.raises(ValueError):
        ExplicitFunction([1.0, 2.0])  # empty set must be 0
    with pytest.raises(ValueError):
        ExplicitFunction([0.0, 1.0, 2.0])  # not a power of two
    with pytest.raises(ValueError):
        ExplicitFunction([0.0] * (1 << 17))


def test_checker_flags_bad_function():
    broken = ExplicitFunction([0.0, 1.0, 1.0, 3.0])
    assert check_monotone_submodular(broken, samples=500, seed=0)
    nonmono = ExplicitFunction([0.0, 2.0, 2.0, 1.0])
    assert check_exhaustive(nonmono)


def test_checker_does_not_touch_counter():
    f = ModularFunction([1, 2, 3])
    check_monotone_submodular(f, samples=100, seed=0)
    assert f.query_count == 0


@settings(max_examples=40, deadline=None)
@given(weights=st.lists(st.integers(0, 20), min_size=1, max_size=8),
       seed=st.integers(0, 10))
def test_modular_passes_checks(weights, seed):
    f = ModularFunction(weights)
    assert check_monotone_submodular(f, samples=120, seed=seed) == []


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 1000))
def test_random_coverage_passes_exhaustive(seed):
    rng = np.random.default_rng(seed)
    f = random_coverage_fn(rng, 6, 9, density=0.35)
    assert check_exhaustive(f) == []


def test_modular_submodularity_with_equality(rng):
    f = random_modular(rng, 8)
    for _ in range(100):
        a_mask = int(rng.integers(0, 1 << 8))
        b_mask = a_mask & int(rng.integers(0, 1 << 8))
        outside = full_mask(8) & ~a_mask
        if not outside:
            continue
        x = 1 << (outside.bit_length() - 1)
        assert f(a_mask | x) - f(a_mask) == pytest.approx(
            f(b_mask | x) - f(b_mask), abs=1e-12)


def test_weighted_coverage():
    f = CoverageFunction([(0,), (0, 1)], universe=2, weights=[2.0, 3.5])
    assert f(mask_of([0])) == 2.0
    assert f(mask_of([1])) == 5.5
    assert f(mask_of([0, 1])) == 5.5


def test_divisor_coverage_exact_rationals():
    f = CoverageFunction([(0, 1, 2, 3, 4, 5), (0,)], universe=6, divisor=6)
    assert f(mask_of([0])) == 1.0
    assert f(mask_of([1])) == 1 / 6

import itertools
from math import comb

import numpy as np
import pytest

from rsmax import (
    BudgetExceededError,
    ModularFunction,
    check_opt_removal_chain,
    conjecture_scan,
    full_mask,
    gen_greedy_failure,
    gen_random_coverage,
    mask_of,
    minimizer,
    opt_plain,
    opt_robust,
    pareto_subset,
    prune_set,
    robust_value,
)
from rsmax.bitsets import elements, size, subsets_of_size

from conftest import coverage_corpus, random_coverage_fn, random_modular


class TestMinimizer:
    def test_tau_zero_is_identity(self):
        f = ModularFunction([4, 2, 7])
        mr = minimizer(f, mask_of([0, 1, 2]), 0)
        assert mr.removed == 0
        assert mr.value == 13

    def test_modular_removes_max_weight(self):
        f = ModularFunction([3, 1, 2])
        mr = minimizer(f, mask_of([0, 1, 2]), 1)
        assert mr.removed == mask_of([0])
        assert mr.value == 3

    def test_greedy_failure_set_collapses(self):
        inst = gen_greedy_failure(4)
        mr = minimizer(inst.oracle, mask_of(range(4)), 1)
        assert mr.removed == mask_of([0])
        assert mr.value == 0.0

    def test_small_set_fully_removable(self):
        f = ModularFunction([5, 5])
        assert minimizer(f, mask_of([0, 1]), 2).value == 0.0
        assert minimizer(f, mask_of([0]), 3).value == 0.0

    def test_budget_error(self):
        f = ModularFunction([1] * 40)
        with pytest.raises(BudgetExceededError):
            minimizer(f, full_mask(40), 12, budget=10**4)

    def test_all_minimizers_collected(self):
        f = ModularFunction([2, 2, 1])
        mr = minimizer(f, mask_of([0, 1, 2]), 1, collect_all=True)
        assert mr.removed == mask_of([0])
        assert set(mr.all_minimizers) == {mask_of([0]), mask_of([1])}

    def test_matches_independent_reverse_enumeration(self, rng):
        # second opinion: enumerate removals in reversed order
        for _ in range(30):
            f = random_coverage_fn(rng, 8, 10)
            A = int(rng.integers(0, 1 << 8))
            tau = int(rng.integers(0, 3))
            mine = minimizer(f, A, tau).value
            other = min(
                (f(A & ~Z) for Z in reversed(list(
                    itertools.chain.from_iterable(
                        subsets_of_size(A, j)
                        for j in range(min(tau, size(A)) + 1))))),
                default=f(A))
            assert mine == other


class TestOptRobust:
    def test_modular_second_best(self):
        f = ModularFunction([5, 4, 1, 1])
        from rsmax import Instance

        inst = Instance(f, k=2, tau=1, label="m")
        mask, value = opt_robust(inst)
        assert value == 4
        assert mask == mask_of([0, 1])

    def test_tau_zero_full_budget_takes_everything(self):
        from rsmax import Instance

        f = ModularFunction([2, 3, 1])
        inst = Instance(f, k=3, tau=0, label="m")
        mask, value = opt_robust(inst)
        assert value == f.clone()(full_mask(3))

    def test_greedy_failure_optimum(self):
        inst = gen_greedy_failure(4)
        mask, value = opt_robust(inst)
        assert value == 3 / 4
        # confirm the redundant block is among the optima by direct scoring
        redundant = mask_of(range(4, 8))
        assert robust_value(inst.oracle, redundant, 1) == 3 / 4

    def test_budget_error(self):
        from rsmax import Instance

        f = ModularFunction([1] * 30)
        inst = Instance(f, k=15, tau=2, label="big")
        with pytest.raises(BudgetExceededError):
            opt_robust(inst, budget=10**5)


class TestRemovalChain:
    def test_holds_with_empty_barred_set(self):
        f = ModularFunction([4, 1, 3, 2])
        from rsmax import Instance

        inst = Instance(f, k=3, tau=1, label="m")
        assert check_opt_removal_chain(inst, 0)

    def test_holds_on_failure_instance(self):
        inst = gen_greedy_failure(4)
        assert check_opt_removal_chain(inst, mask_of([0]))

    def test_holds_over_random_corpus(self):
        for inst in coverage_corpus(40, 100, n=8, universe=10, density=0.35,
                                    k=4, tau=1):
            assert check_opt_removal_chain(inst, 0)
            assert check_opt_removal_chain(inst, mask_of([3]))


class TestParetoSubset:
    def test_single_function_base_case(self, rng):
        f = random_modular(rng, 6, lo=1)
        S = full_mask(6)
        cert = pareto_subset([f], S, 2, [f(S)])
        assert cert is not None
        assert size(cert.members) == 2

    def test_two_modular_complementary(self):
        h1 = ModularFunction([1, 0, 0, 0])
        h2 = ModularFunction([0, 1, 0, 0])
        cert = pareto_subset([h1, h2], full_mask(4), 2, [1.0, 1.0])
        assert cert is not None
        assert cert.members == mask_of([0, 1])
        assert cert.bounds == (1.0, 1.0)

    def test_existence_over_random_pairs(self, rng):
        for _ in range(60):
            k = int(rng.integers(3, 9))
            fs = [random_modular(rng, k, lo=1), random_coverage_fn(rng, k, k + 3)]
            S = full_mask(k)
            targets = [f(S) for f in fs]
            for m in range(2, k + 1):
                cert = pareto_subset(fs, S, m, targets)
                assert cert is not None, (k, m)
                for got, t in zip(cert.bounds, targets):
                    assert got >= (m - 1) / k * t - 1e-9

    def test_none_when_unachievable(self):
        f = ModularFunction([1, 1, 1])
        assert pareto_subset([f], full_mask(3), 2, [100.0]) is None


class TestPruneSet:
    def test_single_function_removes_min_weight(self):
        f = ModularFunction([5, 1, 4, 3, 2])
        out = prune_set([f], full_mask(5), 1)
        assert out == full_mask(5) & ~mask_of([1])

    def test_p_zero_is_identity(self):
        f = ModularFunction([1, 2, 3, 4, 5, 6])
        S = full_mask(6)
        assert prune_set([f], S, 0) == S

    def test_pair_bound_by_direct_evaluation(self, rng):
        k, l, p = 8, 2, 1
        for _ in range(30):
            fs = [random_modular(rng, k, lo=1), random_modular(rng, k, lo=1)]
            S = full_mask(k)
            before = [f(S) for f in fs]
            out = prune_set(fs, S, p)
            assert size(out) == k - p
            factor = (k - 2 * l) / (k - l)
            for f, v in zip(fs, before):
                assert f(out) >= factor * v - 1e-9

    def test_product_bound_two_rounds(self, rng):
        k, l, p = 9, 1, 2
        for _ in range(30):
            fs = [random_coverage_fn(rng, k, k + 4)]
            S = full_mask(k)
            before = [f(S) for f in fs]
            out = prune_set(fs, S, p)
            assert size(out) == k - p
            factor = 1.0
            for j in range(p):
                factor *= (k - j - 2 * l) / (k - j - l)
            for f, v in zip(fs, before):
                assert f(out) >= factor * v - 1e-9

    def test_precondition(self):
        f = ModularFunction([1, 1, 1, 1])
        with pytest.raises(Exception):
            prune_set([f, f.clone()], full_mask(4), 1)  # k <= p + 2l


class TestConjectureScan:
    def test_pair_deficit_within_proven_bound(self):
        report = conjecture_scan(l=2, trials=40, k_max=8, seed=5)
        assert report["max_c"] <= 1.0 + 1e-9

    def test_single_function_base_case(self):
        report = conjecture_scan(l=1, trials=30, k_max=8, seed=6)
        assert report["max_c"] <= 1.0 + 1e-9

    def test_triple_scan_reports(self):
        report = conjecture_scan(l=3, trials=25, k_max=7, seed=7)
        assert report["trials"] == 25
        assert report["per_m"]
        for stats in report["per_m"].values():
            assert stats["max_c"] >= stats["mean_c"] - 1e-12


class TestOptPlain:
    def test_respects_ground_restriction(self):
        f = ModularFunction([9, 5, 4])
        mask, value = opt_plain(f, mask_of([1, 2]), 1)
        assert value == 5
        assert mask == mask_of([1])

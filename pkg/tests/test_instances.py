import json

import numpy as np
import pytest

from rsmax import (
    CoverageFunction,
    Instance,
    ModularFunction,
    PreconditionError,
    augment_with_copies,
    check_exhaustive,
    check_monotone_submodular,
    full_mask,
    gen_greedy_failure,
    gen_hardness_augment,
    gen_partial_copies,
    gen_random_coverage,
    instance_from_json,
    instance_to_json,
    mask_of,
    opt_plain,
    opt_robust,
    partial_copies_layout,
)
from rsmax.instances import CopyMap


class TestGreedyFailure:
    def test_published_values_k4(self):
        f = gen_greedy_failure(4).oracle
        a_first = mask_of(range(4))       # the set value-greedy picks
        redundant = mask_of(range(4, 8))  # the robust alternative
        assert f(a_first) == 1.0
        assert f(a_first & ~1) == 0.0
        assert f(mask_of([0])) == 1.0
        for j in range(4, 8):
            assert f(redundant & ~(1 << j)) == 3 / 4

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_monotone_submodular(self, k):
        inst = gen_greedy_failure(k)
        if inst.n <= 12:
            assert check_exhaustive(inst.oracle) == []
        assert check_monotone_submodular(inst.oracle, 1000, seed=1) == []

    def test_rejects_tiny_k(self):
        with pytest.raises(PreconditionError):
            gen_greedy_failure(1)


class TestPartialCopies:
    def test_published_values(self):
        k = 6
        inst = gen_partial_copies(k)
        lay = partial_copies_layout(k)
        f = inst.oracle
        assert f(mask_of([lay.a1, lay.a2])) == 2.0
        assert f.marginal(mask_of([lay.partials_1[2]]), mask_of([lay.a1])) == 0.0
        assert f(mask_of(lay.garbage)) == 0.0
        assert f(mask_of([lay.a1_copy])) == 1.0
        assert f.marginal(mask_of([lay.a1_copy]), mask_of([lay.a1])) == 0.0
        for e in lay.partials_1 + lay.partials_2:
            assert f(1 << e) == 1 / k

    def test_monotone_submodular(self):
        inst = gen_partial_copies(4)
        assert check_monotone_submodular(inst.oracle, 1000, seed=3) == []

    def test_rejects_tiny_k(self):
        with pytest.raises(PreconditionError):
            gen_partial_copies(3)


class TestCopies:
    def test_copy_identities_exhaustive(self):
        base = gen_random_coverage(n=5, universe=8, density=0.45, seed=9,
                                   k=3, tau=1)
        aug, cmap = augment_with_copies(base, 1)
        f = aug.oracle
        for x in range(5):
            (xc,) = cmap.copies_of(x)
            assert f(1 << xc) == f(1 << x)
            assert f.marginal(1 << xc, 1 << x) == 0.0
            # the stronger law: equal marginals in every context
            for ctx in range(1 << 5):
                assert f((1 << xc) | ctx) == f((1 << x) | ctx)

    def test_pair_collapses_to_single(self):
        base = gen_random_coverage(n=4, universe=6, density=0.5, seed=2,
                                   k=2, tau=1)
        aug, cmap = augment_with_copies(base, 2)
        f = aug.oracle
        x = 1
        c1, c2 = cmap.copies_of(x)
        assert f(mask_of([x, c1])) == f(1 << x)
        assert f(mask_of([x, c1, c2])) == f(1 << x)
        assert f(mask_of([0, 2])) == base.oracle(mask_of([0, 2]))

    def test_projection(self):
        cm = CopyMap(3, 2)
        assert cm.total == 9
        assert cm.copies_of(1) == (4, 7)
        assert cm.project(mask_of([4, 7])) == mask_of([1])
        assert cm.project(mask_of([0, 5])) == mask_of([0, 2])

    def test_keeps_k_tau(self):
        base = gen_random_coverage(n=4, universe=6, density=0.5, seed=0,
                                   k=3, tau=1)
        aug, _ = augment_with_copies(base, 1)
        assert (aug.k, aug.tau, aug.n) == (3, 1, 8)

    def test_augmented_passes_checks(self):
        base = gen_random_coverage(n=5, universe=8, density=0.4, seed=4,
                                   k=3, tau=1)
        aug, _ = augment_with_copies(base, 1)
        assert check_monotone_submodular(aug.oracle, 1000, seed=5) == []


class TestHardnessAugment:
    def test_decoy_weight(self):
        base = Instance(ModularFunction([3, 1, 2]), k=2, tau=0, label="m")
        aug = gen_hardness_augment(base, 1)
        assert aug.oracle(1 << 3) == 9.0  # (k+1) * best singleton
        assert (aug.k, aug.tau, aug.n) == (3, 1, 4)

    def test_rejects_robust_base_and_zero_tau(self):
        robust_base = gen_random_coverage(4, 6, 0.5, 0, k=2, tau=1)
        with pytest.raises(PreconditionError):
            gen_hardness_augment(robust_base, 1)
        plain = Instance(ModularFunction([1, 1, 1]), k=2, tau=0, label="m")
        with pytest.raises(PreconditionError):
            gen_hardness_augment(plain, 0)

    def test_value_preserving_reduction_small(self):
        base = Instance(ModularFunction([5, 2, 4, 1]), k=2, tau=0, label="m")
        aug = gen_hardness_augment(base, 1)
        assert opt_robust(aug)[1] == opt_plain(base.oracle.clone(),
                                               full_mask(4), 2)[1]

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("tau", [1, 2])
    def test_value_preserving_reduction_random(self, seed, tau):
        rng = np.random.default_rng(seed)
        if seed % 2:
            f = ModularFunction(rng.integers(0, 9, size=5).tolist())
        else:
            hits = rng.random((5, 7)) < 0.4
            f = CoverageFunction(
                [tuple(np.flatnonzero(hits[i]).tolist()) for i in range(5)],
                universe=7)
        base = Instance(f, k=3, tau=0, label=f"base{seed}")
        aug = gen_hardness_augment(base, tau)
        lhs = opt_robust(aug)[1]
        rhs = opt_plain(base.oracle.clone(), full_mask(5), 3)[1]
        assert lhs == rhs

    def test_augmented_passes_checks(self):
        base = gen_random_coverage(5, 8, 0.4, 11, k=3, tau=0)
        aug = gen_hardness_augment(base, 2)
        assert check_monotone_submodular(aug.oracle, 1000, seed=6) == []


class TestRandomCoverage:
    def test_deterministic_by_seed(self):
        a = gen_random_coverage(8, 12, 0.3, 7, 4, 1)
        b = gen_random_coverage(8, 12, 0.3, 7, 4, 1)
        assert a.oracle.point_masks == b.oracle.point_masks

    def test_full_density(self):
        inst = gen_random_coverage(5, 9, 1.0, 3, 3, 1)
        for x in range(5):
            assert inst.oracle(1 << x) == 9

    def test_passes_sampler(self):
        inst = gen_random_coverage(8, 12, 0.3, 7, 4, 1)
        assert check_monotone_submodular(inst.oracle, 1000, seed=7) == []

    def test_parameter_validation(self):
        with pytest.raises(PreconditionError):
            gen_random_coverage(4, 6, 0.0, 0, 2, 1)
        with pytest.raises(ValueError):
            gen_random_coverage(4, 6, 0.5, 0, 5, 1)  # k > n


class TestInstanceInvariants:
    def test_tau_below_k(self):
        with pytest.raises(ValueError):
            Instance(ModularFunction([1, 1]), k=1, tau=1, label="bad")
        with pytest.raises(ValueError):
            Instance(ModularFunction([1, 1]), k=3, tau=0, label="bad")


class TestJson:
    def test_round_trip_all_kinds(self, tmp_path):
        instances = [
            gen_random_coverage(6, 9, 0.4, 1, 3, 1),
            Instance(ModularFunction([1, 5, 2]), k=2, tau=1, label="mod"),
            Instance(gen_greedy_failure(4).oracle, k=4, tau=1, label="gf"),
        ]
        for inst in instances:
            blob = json.dumps(instance_to_json(inst))
            back = instance_from_json(json.loads(blob))
            assert back.n == inst.n and back.k == inst.k and back.tau == inst.tau
            probe_a, probe_b = inst.oracle.clone(), back.oracle.clone()
            for mask in range(min(1 << inst.n, 256)):
                assert probe_a(mask) == probe_b(mask)

    def test_copies_round_trip(self):
        base = gen_random_coverage(4, 6, 0.5, 3, k=3, tau=1)
        aug, cmap = augment_with_copies(base, 1)
        d = instance_to_json(aug)
        back = instance_from_json(d)
        assert back.copy_map == cmap
        pa, pb = aug.oracle.clone(), back.oracle.clone()
        for mask in range(1 << 8):
            assert pa(mask) == pb(mask)

    def test_constraint_round_trip(self):
        from rsmax import partition_matroid

        inst = gen_random_coverage(4, 6, 0.5, 3, k=2, tau=1)
        inst.system = partition_matroid([(0, 1), (2, 3)], [1, 1])
        back = instance_from_json(instance_to_json(inst))
        for mask in range(1 << 4):
            assert back.system.independent(mask) == inst.system.independent(mask)

    def test_explicit_replay(self):
        table = [0.0, 1.0, 2.0, 2.5]
        d = {"kind": "explicit", "n": 2, "k": 2, "tau": 1, "table": table}
        inst = instance_from_json(d)
        assert inst.oracle(0b11) == 2.5

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            instance_from_json({"kind": "mystery", "n": 2, "k": 1, "tau": 0})

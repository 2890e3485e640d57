import pytest

from rsmax import (
    ModularFunction,
    PreconditionError,
    cardinality_system,
    full_mask,
    knapsack_system,
    mask_of,
    partition_matroid,
    restrict_system,
    system_greedy,
)
from rsmax.constraints import check_downward_closed


class TestCardinality:
    def test_zero_cap(self):
        sys_ = cardinality_system(4, 0)
        assert sys_.independent(0)
        assert not sys_.independent(1)

    def test_full_cap(self):
        sys_ = cardinality_system(4, 4)
        assert sys_.independent(full_mask(4))

    def test_over_cap(self):
        sys_ = cardinality_system(5, 2)
        assert not sys_.independent(mask_of([0, 1, 2]))


class TestPartition:
    def test_single_part_is_cardinality(self):
        sys_ = partition_matroid([range(5)], [2])
        card = cardinality_system(5, 2)
        for mask in range(1 << 5):
            assert sys_.independent(mask) == card.independent(mask)

    def test_one_from_each(self):
        sys_ = partition_matroid([(0, 1), (2, 3)], [1, 1])
        assert sys_.independent(mask_of([0, 2]))
        assert not sys_.independent(mask_of([0, 1]))

    def test_non_partition_rejected(self):
        with pytest.raises(PreconditionError):
            partition_matroid([(0, 1), (1, 2)], [1, 1])
        with pytest.raises(PreconditionError):
            partition_matroid([(0, 2)], [1])  # gap at 1


class TestKnapsack:
    def test_unit_costs_look_like_cardinality(self):
        sys_ = knapsack_system([1, 1, 1, 1], 2)
        card = cardinality_system(4, 2)
        for mask in range(1 << 4):
            assert sys_.independent(mask) == card.independent(mask)

    def test_zero_budget(self):
        sys_ = knapsack_system([1.0, 2.0], 0)
        assert sys_.independent(0)
        assert not sys_.independent(1)

    def test_over_budget(self):
        sys_ = knapsack_system([2, 3], 4)
        assert not sys_.independent(mask_of([0, 1]))


class TestRestrictedSystem:
    def test_empty_pin_is_base(self):
        base = cardinality_system(4, 2)
        r = restrict_system(base, 0)
        for mask in range(1 << 4):
            assert r.independent(mask) == base.independent(mask)

    def test_pin_membership(self):
        base = cardinality_system(4, 2)
        r = restrict_system(base, mask_of([0]))
        assert r.independent(mask_of([0, 1]))
        assert not r.independent(mask_of([1, 2]))

    def test_dependent_pin_rejected(self):
        base = cardinality_system(4, 1)
        with pytest.raises(PreconditionError):
            restrict_system(base, mask_of([0, 1]))


@pytest.mark.parametrize("sys_", [
    cardinality_system(8, 3),
    partition_matroid([(0, 1, 2), (3, 4), (5, 6, 7)], [1, 2, 1]),
    knapsack_system([1, 2, 1, 3, 2, 1, 1, 2], 5),
])
def test_downward_closure(sys_):
    assert check_downward_closed(sys_) == []


def test_system_greedy_cardinality_matches_plain():
    f = ModularFunction([4, 9, 1, 7, 3])
    out = system_greedy(f, cardinality_system(5, 2))
    assert out == mask_of([1, 3])


def test_system_greedy_respects_partition():
    f = ModularFunction([9, 8, 2, 1])
    sys_ = partition_matroid([(0, 1), (2, 3)], [1, 1])
    out = system_greedy(f.clone(), sys_)
    assert out == mask_of([0, 2])


def test_system_greedy_pinned_start():
    f = ModularFunction([1, 9, 8])
    sys_ = restrict_system(cardinality_system(3, 2), mask_of([0]))
    out = system_greedy(f, sys_, start=mask_of([0]))
    assert out == mask_of([0, 1])

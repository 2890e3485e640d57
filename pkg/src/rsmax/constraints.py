"""Independence systems: downward-closed feasibility oracles.

Feasibility is exposed purely as membership tests; the general robust
algorithm needs nothing more. Concrete systems: cardinality caps,
partition matroids, knapsacks. Restriction pins a set that every feasible
set must contain.
"""

from __future__ import annotations

import itertools

import numpy as np

from .bitsets import elements, full_mask, iter_elements, size
from .errors import PreconditionError
from .oracle import EPS_CMP, SetFunction


class IndependenceSystem:
    """Membership oracle over subsets of {0..n-1}."""

    def __init__(self, n: int, descriptor: str):
        if n < 1:
            raise ValueError("ground set must be non-empty")
        self.n = n
        self.descriptor = descriptor

    def independent(self, mask: int) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class _Cardinality(IndependenceSystem):
    def __init__(self, n, k):
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        super().__init__(n, f"cardinality(n={n},k={k})")
        self.k = k

    def independent(self, mask):
        return mask.bit_count() <= self.k


def cardinality_system(n: int, k: int) -> IndependenceSystem:
    """Feasible iff |A| <= k."""
    return _Cardinality(n, k)


class _PartitionMatroid(IndependenceSystem):
    def __init__(self, parts, caps):
        parts = [int(p) for p in parts]
        caps = [int(c) for c in caps]
        if len(parts) != len(caps):
            raise ValueError("one cap per part required")
        if any(c < 0 for c in caps):
            raise ValueError("caps must be >= 0")
        union = 0
        total = 0
        for p in parts:
            if p & union:
                raise PreconditionError("parts must be disjoint")
            union |= p
            total += p.bit_count()
        n = union.bit_length()
        if union != full_mask(n) or total != n:
            raise PreconditionError("parts must partition the ground set")
        super().__init__(n, f"partition(parts={len(parts)})")
        self.parts = tuple(parts)
        self.caps = tuple(caps)

    def independent(self, mask):
        for p, c in zip(self.parts, self.caps):
            if (mask & p).bit_count() > c:
                return False
        return True


def partition_matroid(parts, caps) -> IndependenceSystem:
    """Feasible iff each part contributes at most its cap.

    ``parts`` are masks (or iterables of element ids) that must partition
    the ground set.
    """
    masks = []
    for p in parts:
        if isinstance(p, int):
            masks.append(p)
        else:
            m = 0
            for x in p:
                m |= 1 << x
            masks.append(m)
    return _PartitionMatroid(masks, caps)


class _Knapsack(IndependenceSystem):
    def __init__(self, costs, budget):
        costs = tuple(float(c) for c in costs)
        if any(c < 0 for c in costs):
            raise ValueError("costs must be non-negative")
        if budget < 0:
            raise ValueError("budget must be >= 0")
        super().__init__(len(costs), f"knapsack(n={len(costs)},budget={budget})")
        self.costs = costs
        self.budget = float(budget)

    def independent(self, mask):
        total = 0.0
        for x in iter_elements(mask):
            total += self.costs[x]
        return total <= self.budget + EPS_CMP


def knapsack_system(costs, budget) -> IndependenceSystem:
    """Feasible iff the summed element costs stay within the budget."""
    return _Knapsack(costs, budget)


class RestrictedSystem(IndependenceSystem):
    """Feasible iff the pinned set is contained and the base accepts."""

    def __init__(self, base: IndependenceSystem, pinned: int):
        if not base.independent(pinned):
            raise PreconditionError("pinned set must be independent in the base")
        super().__init__(base.n, f"{base.descriptor}|pin={pinned:#x}")
        self.base = base
        self.pinned = pinned

    def independent(self, mask):
        return (mask & self.pinned) == self.pinned and self.base.independent(mask)


def restrict_system(sys: IndependenceSystem, Z: int) -> RestrictedSystem:
    return RestrictedSystem(sys, Z)


def system_greedy(f: SetFunction, system: IndependenceSystem,
                  ground: int | None = None, start: int = 0) -> int:
    """Default non-robust subroutine: extend ``start`` with the feasible
    element of maximum marginal gain until no feasible addition remains.

    Ties go to the smallest element id. Infeasible candidates are skipped
    without an oracle query.
    """
    if ground is None:
        ground = full_mask(system.n)
    A = start
    cur = f(A) if A else 0.0
    while True:
        best_x = None
        best_v = cur
        rest = ground & ~A
        while rest:
            low = rest & -rest
            rest ^= low
            if not system.independent(A | low):
                continue
            v = f(A | low)
            if best_x is None or v > best_v + EPS_CMP:
                best_x = low
                best_v = v
        if best_x is None:
            return A
        A |= best_x
        cur = best_v


def check_downward_closed(system: IndependenceSystem, samples: int = 2000,
                          seed: int = 0) -> list[str]:
    """Audit: empty set feasible, and feasibility survives element removal.

    Exhaustive for n <= 12, sampled otherwise.
    """
    bad = []
    if not system.independent(0):
        bad.append("empty set not independent")
    n = system.n
    if n <= 12:
        for mask in range(1, 1 << n):
            if not system.independent(mask):
                continue
            for x in elements(mask):
                if not system.independent(mask & ~(1 << x)):
                    bad.append(f"removal of {x} from {mask:#x} broke feasibility")
    else:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            mask = int.from_bytes(rng.bytes((n + 7) // 8), "little") & full_mask(n)
            if not system.independent(mask) or not mask:
                continue
            xs = elements(mask)
            x = xs[int(rng.integers(0, len(xs)))]
            if not system.independent(mask & ~(1 << x)):
                bad.append(f"removal of {x} from {mask:#x} broke feasibility")
    return bad


def system_to_json(system: IndependenceSystem) -> dict:
    if isinstance(system, _Cardinality):
        return {"type": "cardinality", "n": system.n, "k": system.k}
    if isinstance(system, _PartitionMatroid):
        return {
            "type": "partition",
            "parts": [elements(p) for p in system.parts],
            "caps": list(system.caps),
        }
    if isinstance(system, _Knapsack):
        return {"type": "knapsack", "costs": list(system.costs),
                "budget": system.budget}
    raise ValueError(f"cannot serialize system {system!r}")


def system_from_json(d: dict) -> IndependenceSystem:
    kind = d.get("type")
    if kind == "cardinality":
        return cardinality_system(d["n"], d["k"])
    if kind == "partition":
        return partition_matroid(d["parts"], d["caps"])
    if kind == "knapsack":
        return knapsack_system(d["costs"], d["budget"])
    raise ValueError(f"unknown constraint type {kind!r}")

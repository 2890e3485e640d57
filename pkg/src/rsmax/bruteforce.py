"""Exact exhaustive reference computations.

Everything here enumerates; nothing samples. The results are ground truth
for the test suite: worst-case removals, robust optima, the removal-chain
upper bound, existence of balanced tuples, pruning, and the empirical
tuple-deficit scan. Budgets are hard limits -- exceeding one raises
instead of degrading silently.

Enumeration order is fixed (sizes ascending, then lexicographic element
tuples) and every tie breaks toward the first candidate in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .bitsets import elements, full_mask, size, subsets_of_size, subsets_up_to
from .errors import BudgetExceededError, PreconditionError
from .instances import Instance, gen_random_coverage
from .oracle import EPS_CMP, CoverageFunction, ModularFunction, SetFunction

DEFAULT_MINIMIZER_BUDGET = 10**7
DEFAULT_OPT_BUDGET = 10**8
DEFAULT_SUBSET_BUDGET = 10**7


def _require_budget(work: int, budget: int, what: str):
    if work > budget:
        raise BudgetExceededError(
            f"{what} needs {work} evaluations, over the budget of {budget}")


def _removal_work(a_size: int, tau: int) -> int:
    return sum(comb(a_size, j) for j in range(min(tau, a_size) + 1))


@dataclass(frozen=True)
class MinimizerResult:
    """Worst-case removal: Z minimizes f(A - Z) over |Z| <= tau."""

    removed: int
    value: float
    all_minimizers: tuple[int, ...] | None = None


def minimizer(f: SetFunction, A: int, tau: int,
              budget: int = DEFAULT_MINIMIZER_BUDGET,
              collect_all: bool = False) -> MinimizerResult:
    """Exact minimizer of f(A-Z) over removals Z <= A with |Z| <= tau.

    Removing nothing is allowed, so the value is 0 whenever |A| <= tau.
    Ties break toward the first subset in canonical order (the empty set,
    then singletons ascending, ...).
    """
    if tau < 0:
        raise PreconditionError("tau must be >= 0")
    _require_budget(_removal_work(size(A), tau), budget, "minimizer")
    best_z = 0
    best_v = f(A)
    for Z in subsets_up_to(A, tau):
        if Z == 0:
            continue
        v = f(A & ~Z)
        if v < best_v:
            best_v = v
            best_z = Z
    ties = None
    if collect_all:
        ties = tuple(
            Z for Z in subsets_up_to(A, tau)
            if f(A & ~Z) <= best_v + EPS_CMP
        )
    return MinimizerResult(best_z, best_v, ties)


def robust_value(f: SetFunction, A: int, tau: int,
                 budget: int = DEFAULT_MINIMIZER_BUDGET) -> float:
    """Value surviving the worst removal of up to tau elements."""
    return minimizer(f, A, tau, budget).value


def opt_plain(f: SetFunction, ground: int, k: int,
              budget: int = DEFAULT_OPT_BUDGET) -> tuple[int, float]:
    """Exact argmax of f over subsets of ``ground`` with |A| <= k."""
    g = min(k, size(ground))
    _require_budget(sum(comb(size(ground), j) for j in range(g + 1)),
                    budget, "plain optimum")
    best_a, best_v = 0, f(0)
    for A in subsets_up_to(ground, k):
        if A == 0:
            continue
        v = f(A)
        if v > best_v:
            best_a, best_v = A, v
    return best_a, best_v


def opt_robust(inst: Instance,
               budget: int = DEFAULT_OPT_BUDGET) -> tuple[int, float]:
    """Exact robust optimum: argmax over |A| <= k of the surviving value
    under the worst removal of up to tau elements."""
    f, k, tau = inst.oracle, inst.k, inst.tau
    n = f.n
    work = sum(comb(n, j) * _removal_work(j, tau) for j in range(k + 1))
    _require_budget(work, budget, "robust optimum")
    best_a, best_v = 0, 0.0
    ground = full_mask(n)
    for A in subsets_up_to(ground, k):
        v = f(A)
        if size(A) > tau:
            for Z in subsets_up_to(A, tau):
                if Z == 0:
                    continue
                w = f(A & ~Z)
                if w < v:
                    v = w
        else:
            v = 0.0
        if v > best_v:
            best_a, best_v = A, v
    return best_a, best_v


def check_opt_removal_chain(inst: Instance, X: int,
                            budget: int = DEFAULT_OPT_BUDGET) -> bool:
    """Verify, by exhaustive evaluation, that the robust optimum at level
    tau is bounded by the plain optimum on k - tau elements, with or
    without any |X| <= tau elements barred from the ground set:

        robust_opt(k, N, tau) <= plain_opt(k-tau, N-X) <= plain_opt(k-tau, N)

    Must hold for every valid instance; a False return is a bug in the
    oracle under test.
    """
    if size(X) > inst.tau:
        raise PreconditionError("X may contain at most tau elements")
    f, k, tau = inst.oracle, inst.k, inst.tau
    lhs = opt_robust(inst, budget)[1]
    mid = opt_plain(f, full_mask(f.n) & ~X, k - tau, budget)[1]
    rhs = opt_plain(f, full_mask(f.n), k - tau, budget)[1]
    return lhs <= mid <= rhs


@dataclass(frozen=True)
class TupleCertificate:
    """A subset together with the per-function values it achieves."""

    members: int
    bounds: tuple[float, ...]


def pareto_subset(fs, S: int, m: int, targets,
                  budget: int = DEFAULT_SUBSET_BUDGET) -> TupleCertificate | None:
    """First size-m subset X of S with f_i(X) >= ((m-1)/k) * target_i for
    every function, k = |S|; None if no subset qualifies.

    For two functions with f_i(S) >= target_i such an X always exists for
    every 2 <= m <= k, so a None return under those preconditions is a
    test failure upstream.
    """
    fs = list(fs)
    targets = [float(t) for t in targets]
    if len(fs) != len(targets):
        raise PreconditionError("one target per function required")
    k = size(S)
    if not 1 <= m <= k:
        raise PreconditionError(f"need 1 <= m <= |S|, got m={m}, |S|={k}")
    _require_budget(comb(k, m) * len(fs), budget, "tuple search")
    thresholds = [(m - 1) / k * t for t in targets]
    for X in subsets_of_size(S, m):
        vals = []
        ok = True
        for f, thr in zip(fs, thresholds):
            v = f(X)
            if v < thr - EPS_CMP:
                ok = False
                break
            vals.append(v)
        if ok:
            return TupleCertificate(X, tuple(vals))
    return None


def prune_set(fs, S: int, p: int) -> int:
    """Drop p elements from S while approximately preserving every f_i.

    Each round orders the current set by ascending element id, builds the
    modular surrogate h_i(x) = f_i(x | predecessors), and removes an
    element that is simultaneously cheap for every surrogate: among the
    1 + ceil((l-1) k / l) smallest for the first function and the
    ceil((l-1) k / l) smallest for each other one (such an element always
    exists by counting). The output of size |S| - p satisfies

        f_i(S_p) >= prod_{j=0}^{p-1} (k-j-2l)/(k-j-l) * f_i(S)

    which callers verify by direct evaluation rather than trusting this
    construction.
    """
    fs = list(fs)
    l = len(fs)
    k0 = size(S)
    if l < 1 or p < 0:
        raise PreconditionError("need at least one function and p >= 0")
    if k0 <= p + 2 * l:
        raise PreconditionError(
            f"need |S| > p + 2l, got |S|={k0}, p={p}, l={l}")
    cur = S
    for _ in range(p):
        ids = elements(cur)
        kc = len(ids)
        surrogates = []
        for f in fs:
            prefix = 0
            prev = 0.0
            h = {}
            for x in ids:
                v = f(prefix | (1 << x))
                h[x] = v - prev
                prefix |= 1 << x
                prev = v
            surrogates.append(h)
        s = -(-((l - 1) * kc) // l)  # ceil
        ranked = [sorted(ids, key=lambda x: (h[x], x)) for h in surrogates]
        candidates = set(ranked[0][: 1 + s])
        for r in ranked[1:]:
            candidates &= set(r[:s])
        if not candidates:
            raise AssertionError("pruning window unexpectedly empty")
        cur &= ~(1 << min(candidates))
    return cur


def conjecture_scan(l: int, trials: int, k_max: int, seed: int) -> dict:
    """Empirical worst-case deficit of balanced tuples for l functions.

    For random families of l modular or coverage functions on a size-k
    ground set S with targets V_i = f_i(S), and for every tuple size
    m in l..k, computes the smallest c such that some size-m subset X has
    f_i(X) >= ((m - c)/k) V_i for every i. Reports per-m and overall
    worst cases; purely informational, never a gate.
    """
    if l < 1:
        raise PreconditionError("need l >= 1")
    if k_max > 12:
        raise PreconditionError("scan limited to k_max <= 12")
    rng = np.random.default_rng(seed)
    per_m: dict[int, list[float]] = {}
    done = 0
    while done < trials:
        k = int(rng.integers(max(l, 2), k_max + 1))
        fs = []
        for _ in range(l):
            if rng.integers(0, 2) == 0:
                ws = rng.integers(1, 10, size=k)
                fs.append(ModularFunction(ws.tolist()))
            else:
                u = k + int(rng.integers(1, k + 1))
                hits = rng.random((k, u)) < 0.4
                sets = [tuple(np.flatnonzero(hits[i]).tolist()) for i in range(k)]
                fs.append(CoverageFunction(sets, universe=u))
        S = full_mask(k)
        targets = [f(S) for f in fs]
        if any(t <= 0 for t in targets):
            continue
        done += 1
        for m in range(l, k + 1):
            best_t = 0.0
            for X in subsets_of_size(S, m):
                t = min(k * f(X) / v for f, v in zip(fs, targets))
                if t > best_t:
                    best_t = t
            per_m.setdefault(m, []).append(m - best_t)
    summary = {
        m: {
            "max_c": max(cs),
            "mean_c": sum(cs) / len(cs),
            "count": len(cs),
        }
        for m, cs in sorted(per_m.items())
    }
    return {
        "l": l,
        "trials": trials,
        "k_max": k_max,
        "seed": seed,
        "per_m": summary,
        "max_c": max((v["max_c"] for v in summary.values()), default=0.0),
    }


def random_coverage_corpus(count: int, seed: int, n: int, universe: int,
                           density: float, k: int, tau: int) -> list[Instance]:
    """Deterministic family of random coverage instances for statistics."""
    return [
        gen_random_coverage(n, universe, density, seed + i, k, tau)
        for i in range(count)
    ]

"""Maximization algorithms robust to adversarial element removal.

Every algorithm returns a :class:`RobustResult`: the chosen set, the exact
worst-case removal found by brute force, both the plain and the surviving
value, the oracle queries spent by the algorithm itself (final diagnostics
run on a clone and are not charged), and a trace of per-iteration
decisions. All argmax steps break ties toward the smallest element id (or
lexicographically smallest tuple), which makes traces reproducible.

The line-up:

* value greedy, descending-threshold greedy, and the naive top-k baseline;
* copy-based constructions for ground sets where duplicated elements are
  available (duplicate the two anchors; duplicate a block; geometrically
  decaying duplication);
* single-removal algorithms without copies (seed-and-ignore the best
  element; three guarded phases; min-gain tuple additions);
* a disjoint-blocks construction for removal levels up to sqrt(k/log k);
* a scheme for constant removal levels that binary-searches the optimum
  estimate against a pluggable multi-objective subsolver;
* an enumerative reduction for general independence systems that turns
  any non-robust approximation into a robust one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

from . import bruteforce
from .bitsets import bit, elements, full_mask, iter_elements, size, subsets_of_size
from .constraints import IndependenceSystem, restrict_system, system_greedy
from .errors import (
    BudgetExceededError,
    InconsistentBoundsError,
    InfeasibleTargetsError,
    PreconditionError,
)
from .instances import CopyMap, Instance
from .oracle import EPS_CMP, SetFunction, SubmodularOracle, require_submodular, restrict


def beta(eta: float, alpha: float) -> float:
    """Guarantee bound (e^alpha - 1) / (e^alpha - eta).

    Expresses greedy-type approximation factors; beta(0, 1) = 1 - 1/e.
    Defined for 0 <= eta <= 1 and alpha >= 0; the corner (1, 0) takes its
    limit value 1.
    """
    if not 0.0 <= eta <= 1.0:
        raise PreconditionError(f"eta must lie in [0, 1], got {eta}")
    if alpha < 0.0:
        raise PreconditionError(f"alpha must be >= 0, got {alpha}")
    if eta == 1.0 and alpha == 0.0:
        return 1.0
    ea = math.exp(alpha)
    return (ea - 1.0) / (ea - eta)


@dataclass(frozen=True)
class BetaBound:
    eta: float
    alpha: float

    @property
    def value(self) -> float:
        return beta(self.eta, self.alpha)


@dataclass(frozen=True)
class TraceStep:
    step: int
    added: tuple[int, ...]
    rule: str


@dataclass(frozen=True)
class RobustResult:
    """Outcome of one algorithm run.

    ``removed``/``g_value`` come from exact enumeration at the instance's
    removal level; when the chosen set is too large to enumerate they are
    None and ``minimizer_exact`` is False.
    """

    selected: int
    f_value: float
    g_value: float | None
    removed: int | None
    queries: int
    trace: tuple[TraceStep, ...]
    minimizer_exact: bool = True
    info: dict | None = None

    @property
    def selected_elements(self) -> list[int]:
        return elements(self.selected)


def _finalize(f: SetFunction, selected: int, tau: int, trace, q0: int,
              info: dict | None = None,
              minimizer_budget: int = bruteforce.DEFAULT_MINIMIZER_BUDGET
              ) -> RobustResult:
    queries = f.query_count - q0
    probe = f.clone()
    f_value = probe(selected)
    try:
        mr = bruteforce.minimizer(probe, selected, tau, budget=minimizer_budget)
        return RobustResult(selected, f_value, mr.value, mr.removed,
                            queries, tuple(trace), True, info)
    except BudgetExceededError:
        return RobustResult(selected, f_value, None, None,
                            queries, tuple(trace), False, info)


def _family_queries(fs) -> int:
    """Evaluations across a family, each underlying counter counted once."""
    seen: set[int] = set()
    total = 0
    for f in fs:
        for c in f._counters():
            if id(c) not in seen:
                seen.add(id(c))
                total += c.value
    return total


def _best_addition(f: SetFunction, candidates: int, base: int,
                   base_val: float) -> tuple[int | None, float]:
    """Smallest-id argmax of f(x | base); returns (element, f(base + x))."""
    best_x = None
    best_v = base_val
    rest = candidates
    while rest:
        low = rest & -rest
        rest ^= low
        v = f(base | low)
        if best_x is None or v > best_v + EPS_CMP:
            best_x = low.bit_length() - 1
            best_v = v
    return best_x, best_v


def greedy(f: SubmodularOracle, ground: int, k: int, start: int = 0,
           tau: int = 0) -> RobustResult:
    """Plain value greedy from ``start`` up to k elements total.

    Scores the output at removal level ``tau`` (0 = non-robust use).
    """
    require_submodular(f)
    if k > size(ground | start):
        raise PreconditionError("k exceeds the candidate ground set")
    q0 = f.query_count
    A = start
    cur = f(A) if A else 0.0
    trace = []
    step = 0
    while size(A) < k:
        x, v = _best_addition(f, ground & ~A, A, cur)
        if x is None:
            raise PreconditionError("ran out of candidates before reaching k")
        A |= bit(x)
        cur = v
        step += 1
        trace.append(TraceStep(step, (x,), "greedy"))
    return _finalize(f, A, tau, trace, q0)


def greedy_order(f: SubmodularOracle, ground: int,
                 length: int | None = None) -> list[int]:
    """Greedy addition order over ``ground`` (ties to smallest id)."""
    require_submodular(f)
    if length is None:
        length = size(ground)
    A = 0
    cur = 0.0
    order = []
    while len(order) < length:
        x, v = _best_addition(f, ground & ~A, A, cur)
        if x is None:
            break
        A |= bit(x)
        cur = v
        order.append(x)
    return order


def greedy_threshold(f: SubmodularOracle, ground: int, k: int, eps: float,
                     tau: int = 0) -> RobustResult:
    """Descending-threshold greedy.

    The acceptance threshold starts at the best singleton value, decays by
    (1 - eps) per sweep, and any element whose marginal meets it is added,
    until k elements are chosen or the threshold falls below eps/n times
    its start. Costs O((n/eps) log(n/eps)) queries at a (1 - eps) cost in
    the guarantee relative to plain greedy.
    """
    require_submodular(f)
    if not 0.0 < eps < 1.0:
        raise PreconditionError("eps must lie in (0, 1)")
    if k > size(ground):
        raise PreconditionError("k exceeds the candidate ground set")
    q0 = f.query_count
    w0 = 0.0
    for x in iter_elements(ground):
        v = f(bit(x))
        if v > w0:
            w0 = v
    A = 0
    cur = 0.0
    trace = []
    step = 0
    w = w0
    floor = (eps / size(ground)) * w0
    while size(A) < k and w >= floor and w0 > 0.0:
        rest = ground & ~A
        while rest:
            low = rest & -rest
            rest ^= low
            v = f(A | low)
            if v - cur + EPS_CMP >= w:
                A |= low
                cur = v
                step += 1
                trace.append(TraceStep(step, (low.bit_length() - 1,),
                                       f"threshold>={w:.6g}"))
                if size(A) == k:
                    break
        w *= 1.0 - eps
    return _finalize(f, A, tau, trace, q0)


def naive_topk(f: SubmodularOracle, ground: int, k: int,
               tau: int = 0) -> RobustResult:
    """Baseline: the k individually most valuable elements."""
    require_submodular(f)
    if k > size(ground):
        raise PreconditionError("k exceeds the candidate ground set")
    q0 = f.query_count
    vals = [(-(f(bit(x))), x) for x in iter_elements(ground)]
    vals.sort()
    A = 0
    trace = []
    for i, (negv, x) in enumerate(vals[:k], start=1):
        A |= bit(x)
        trace.append(TraceStep(i, (x,), "top-value"))
    return _finalize(f, A, tau, trace, q0)


# ---------------------------------------------------------------------------
# Algorithms using copies
# ---------------------------------------------------------------------------


def _need_copy_map(inst: Instance, copy_map: CopyMap | None) -> CopyMap:
    cm = copy_map or inst.copy_map
    if cm is None:
        raise PreconditionError("this algorithm needs an instance with copies")
    return cm


def two_copy(inst: Instance, copy_map: CopyMap | None = None) -> RobustResult:
    """Greedy k-2 originals, then duplicate the first two.

    The two anchors are the only elements whose removal can be costly, and
    their copies neutralize that, at the price of two greedy steps.
    """
    cm = _need_copy_map(inst, copy_map)
    if inst.tau != 1:
        raise PreconditionError("duplicate-the-anchors handles tau = 1")
    if inst.k < 4:
        raise PreconditionError("needs k >= 4")
    if inst.k - 2 > cm.n_original:
        raise PreconditionError("not enough originals for k - 2 greedy steps")
    f = inst.oracle
    q0 = f.query_count
    A = 0
    cur = 0.0
    trace = []
    order = []
    for step in range(1, inst.k - 1):
        x, v = _best_addition(f, cm.originals & ~A, A, cur)
        A |= bit(x)
        cur = v
        order.append(x)
        trace.append(TraceStep(step, (x,), "greedy"))
    for i, anchor in enumerate(order[:2]):
        c = cm.copies_of(anchor)[0]
        A |= bit(c)
        trace.append(TraceStep(inst.k - 1 + i, (c,), "copy"))
    return _finalize(f, A, 1, trace, q0)


def copies_block(inst: Instance,
                 copy_map: CopyMap | None = None) -> RobustResult:
    """Greedy k - 2 tau^2 originals, then duplicate the first 2 tau of
    them tau times each.

    Every early element ends up in tau + 1 interchangeable instances, so
    no removal of tau elements can touch the valuable prefix.
    """
    cm = _need_copy_map(inst, copy_map)
    tau, k = inst.tau, inst.k
    if tau < 1:
        raise PreconditionError("needs tau >= 1")
    need = 2 * tau * tau + 2 * tau
    if k <= need:
        raise PreconditionError(f"needs k > 2 tau^2 + 2 tau = {need}")
    if cm.copies_per < tau:
        raise PreconditionError(f"needs {tau} copies per element")
    base_len = k - 2 * tau * tau
    if base_len > cm.n_original:
        raise PreconditionError("not enough originals for the greedy prefix")
    f = inst.oracle
    q0 = f.query_count
    A = 0
    cur = 0.0
    trace = []
    order = []
    step = 0
    for _ in range(base_len):
        x, v = _best_addition(f, cm.originals & ~A, A, cur)
        A |= bit(x)
        cur = v
        order.append(x)
        step += 1
        trace.append(TraceStep(step, (x,), "greedy"))
    for anchor in order[: 2 * tau]:
        for c in cm.copies_of(anchor)[:tau]:
            A |= bit(c)
            step += 1
            trace.append(TraceStep(step, (c,), "copy"))
    return _finalize(f, A, tau, trace, q0)


def _geometric_copy_plan(tau: int) -> list[tuple[int, int, int]]:
    """(first_index, last_index, copies) blocks, indices 1-based in greedy
    order: tau copies for elements 1-2, then halving per doubling block."""
    blocks = []
    for i in range(1, math.ceil(math.log2(2 * tau)) + 1):
        first = 2**i - 1
        last = 2 ** (i + 1) - 2
        copies = -(-tau // 2 ** (i - 1))  # ceil
        blocks.append((first, last, copies))
    return blocks


def copies_geometric(inst: Instance,
                     copy_map: CopyMap | None = None) -> RobustResult:
    """Geometrically decaying duplication, then greedy fill.

    Starts from the first 2 tau greedy elements, adds ceil(tau / 2^(i-1))
    copies for each element in the i-th doubling block of the greedy
    order, and fills greedily to k over the whole ground set. Total
    duplication is O(tau log tau) instead of the 2 tau^2 of the block
    scheme.
    """
    cm = _need_copy_map(inst, copy_map)
    tau, k = inst.tau, inst.k
    if tau < 1:
        raise PreconditionError("needs tau >= 1")
    plan = _geometric_copy_plan(tau)
    prefix_len = max(2 * tau, plan[-1][1])
    if prefix_len > cm.n_original:
        raise PreconditionError(
            f"needs at least {prefix_len} originals for the copy plan")
    pre_fill = 2 * tau + sum((last - first + 1) * c for first, last, c in plan)
    if pre_fill > k:
        raise PreconditionError(
            f"needs k >= {pre_fill} to hold the duplicated prefix")
    if max(c for _, _, c in plan) > cm.copies_per:
        raise PreconditionError(f"needs {tau} copies per element")
    f = inst.oracle
    q0 = f.query_count
    trace = []
    step = 0
    A = 0
    cur = 0.0
    order = []
    for _ in range(prefix_len):
        x, v = _best_addition(f, cm.originals & ~A, A, cur)
        A |= bit(x)
        cur = v
        order.append(x)
        step += 1
        if len(order) <= 2 * tau:
            trace.append(TraceStep(step, (x,), "greedy"))
    A = 0
    for x in order[: 2 * tau]:
        A |= bit(x)
    for first, last, c in plan:
        for idx in range(first, last + 1):
            anchor = order[idx - 1]
            for cp in cm.copies_of(anchor)[:c]:
                A |= bit(cp)
                step += 1
                trace.append(TraceStep(step, (cp,), f"copy(x{c})"))
    cur = f(A)
    n_all = full_mask(f.n)
    while size(A) < k:
        x, v = _best_addition(f, n_all & ~A, A, cur)
        A |= bit(x)
        cur = v
        step += 1
        trace.append(TraceStep(step, (x,), "fill"))
    return _finalize(f, A, tau, trace, q0)


# ---------------------------------------------------------------------------
# tau = 1 without copies
# ---------------------------------------------------------------------------


def ignore_first(f: SubmodularOracle, ground: int, k: int) -> RobustResult:
    """Seed with the best singleton, then grow greedily while pretending
    the seed is absent.

    The marginal of each candidate is measured against the chosen set
    minus the seed, so the algorithm naturally picks a stand-in for the
    seed if one exists.
    """
    require_submodular(f)
    if k < 2 or k > size(ground):
        raise PreconditionError("needs 2 <= k <= |ground|")
    q0 = f.query_count
    a1, _ = _best_addition(f, ground, 0, 0.0)
    A = bit(a1)
    trace = [TraceStep(1, (a1,), "seed")]
    base = 0
    base_val = 0.0
    step = 1
    while size(A) < k:
        x, v = _best_addition(f, ground & ~A, base, base_val)
        A |= bit(x)
        base |= bit(x)
        base_val = v
        step += 1
        trace.append(TraceStep(step, (x,), "ignore-seed"))
    return _finalize(f, A, 1, trace, q0)


def three_phase(f: SubmodularOracle, ground: int, k: int) -> RobustResult:
    """Ignore the first anchor while it dominates, then the second, then
    finish with plain greedy.

    An anchor dominates while its marginal contribution exceeds a third of
    the current set value; no element outside the first two can ever cross
    that bar. Requires k >= 8 outright, since the guarantee's accounting
    needs that many slots; smaller k is an explicit error and callers may
    fall back to the seed-and-ignore algorithm.
    """
    require_submodular(f)
    if k < 8:
        raise PreconditionError(
            "three guarded phases need k >= 8; use ignore_first for small k")
    if k > size(ground):
        raise PreconditionError("k exceeds the candidate ground set")
    q0 = f.query_count
    a1, v1 = _best_addition(f, ground, 0, 0.0)
    a2, v12 = _best_addition(f, ground & ~bit(a1), bit(a1), v1)
    A = bit(a1) | bit(a2)
    trace = [TraceStep(1, (a1,), "seed"), TraceStep(2, (a2,), "seed")]
    step = 2

    def guarded_phase(anchor: int, rule: str):
        nonlocal A, step
        ab = bit(anchor)
        while size(A) < k:
            f_all = f(A)
            f_rest = f(A & ~ab)
            if not f_all - f_rest > f_all / 3.0:
                return
            x, v = _best_addition(f, ground & ~A, A & ~ab, f_rest)
            A |= bit(x)
            step += 1
            trace.append(TraceStep(step, (x,), rule))

    guarded_phase(a1, "phase1")
    guarded_phase(a2, "phase2")
    cur = f(A)
    while size(A) < k:
        x, v = _best_addition(f, ground & ~A, A, cur)
        A |= bit(x)
        cur = v
        step += 1
        trace.append(TraceStep(step, (x,), "phase3"))
    return _finalize(f, A, 1, trace, q0)


def _singleton_removal_values(f: SetFunction, A: int) -> dict[int, float]:
    return {x: f(A & ~bit(x)) for x in iter_elements(A)}


def biobjective_robust(f: SubmodularOracle, ground: int, k: int,
                       m: int) -> RobustResult:
    """Min-gain tuple additions while the two anchors are the adversary's
    best targets, then plain greedy.

    Each phase-1 step adds the size-min(m, k-|A|) tuple maximizing the
    gain of min{f(A - a1 + S), f(A - a2 + S)}, enumerated exhaustively;
    the phase runs while every worst singleton removal of the current set
    is one of the two anchors. m = 1 is allowed but can stall on worthless
    elements; the guarantee regime is m >= 2 with k comfortably above 2m.
    Queries scale as n^(m+1).
    """
    require_submodular(f)
    if m < 1:
        raise PreconditionError("tuple size m must be >= 1")
    if k < 2 or k > size(ground):
        raise PreconditionError("needs 2 <= k <= |ground|")
    q0 = f.query_count
    a1, v1 = _best_addition(f, ground, 0, 0.0)
    a2, _ = _best_addition(f, ground & ~bit(a1), bit(a1), v1)
    A = bit(a1) | bit(a2)
    anchors = A
    trace = [TraceStep(1, (a1,), "seed"), TraceStep(2, (a2,), "seed")]
    step = 2
    while size(A) < k:
        rem = _singleton_removal_values(f, A)
        worst = min(rem.values())
        if any(v <= worst + EPS_CMP and not anchors & bit(x)
               for x, v in rem.items()):
            break
        base1 = A & ~bit(a1)
        base2 = A & ~bit(a2)
        l = min(m, k - size(A))
        best_s = None
        best_v = -math.inf
        for S in subsets_of_size(ground & ~A, l):
            v = min(f(base1 | S), f(base2 | S))
            if best_s is None or v > best_v + EPS_CMP:
                best_s, best_v = S, v
        if best_s is None:
            break
        A |= best_s
        step += 1
        trace.append(TraceStep(step, tuple(elements(best_s)), "min-gain"))
    cur = f(A)
    while size(A) < k:
        x, v = _best_addition(f, ground & ~A, A, cur)
        A |= bit(x)
        cur = v
        step += 1
        trace.append(TraceStep(step, (x,), "greedy"))
    return _finalize(f, A, 1, trace, q0)


# ---------------------------------------------------------------------------
# Bi-objective tuple greedy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TupleRound:
    added: tuple[int, ...]
    tuple_size: int
    before: tuple[float, ...]
    after: tuple[float, ...]


@dataclass(frozen=True)
class TupleGreedyResult:
    selected: int
    rounds: tuple[TupleRound, ...]
    values: tuple[float, ...]
    queries: int


def generalized_greedy(fs, targets, k: int, l: int, m: int,
                       ground: int | None = None) -> TupleGreedyResult:
    """Tuple greedy for several objectives at once.

    Adds l elements in rounds of (up to) m: each round enumerates all
    tuples of the round size mm and takes the first whose marginal is at
    least ((mm - 1)/k) (target_i - current_i) for every objective. If a
    size-k witness set meeting the targets exists, every round succeeds
    and after l elements each objective reaches
    (1 - (1 - (m-1)/(m k))^l) * target_i. A round with no qualifying
    tuple raises with a certificate: the targets are unachievable.
    Queries scale as n^(m+1).
    """
    fs = [require_submodular(f) for f in fs]
    if not fs:
        raise PreconditionError("at least one objective required")
    targets = [float(t) for t in targets]
    if len(targets) != len(fs):
        raise PreconditionError("one target per objective required")
    if ground is None:
        ground = full_mask(fs[0].n)
    if not 1 <= m <= k:
        raise PreconditionError("need 1 <= m <= k")
    if l > size(ground):
        raise PreconditionError("l exceeds the candidate ground set")
    q0 = _family_queries(fs)
    A = 0
    vals = [0.0] * len(fs)
    rounds = []
    idx = 0
    while size(A) < l:
        mm = min(m, l - size(A))
        need = [vals[i] + (mm - 1) / k * (targets[i] - vals[i])
                for i in range(len(fs))]
        chosen = None
        chosen_vals = None
        for S in subsets_of_size(ground & ~A, mm):
            ok = True
            got = []
            for f, bar in zip(fs, need):
                v = f(A | S)
                if v < bar - EPS_CMP:
                    ok = False
                    break
                got.append(v)
            if ok:
                chosen, chosen_vals = S, got
                break
        if chosen is None:
            raise InfeasibleTargetsError(
                f"no size-{mm} tuple can lift all objectives to their "
                f"round targets; the requested values are unachievable",
                round_index=idx, selected=A, targets=tuple(targets))
        rounds.append(TupleRound(tuple(elements(chosen)), mm,
                                 tuple(vals), tuple(chosen_vals)))
        A |= chosen
        vals = chosen_vals
        idx += 1
    queries = _family_queries(fs) - q0
    return TupleGreedyResult(A, tuple(rounds), tuple(vals), queries)


# ---------------------------------------------------------------------------
# Blocks construction for tau up to sqrt(k / log k)
# ---------------------------------------------------------------------------


def _blocks_phase(f: SubmodularOracle, ground: int, k: int, tau: int,
                  block_size: int):
    """tau disjoint greedy blocks of block_size, each grown with fresh
    marginals ignoring earlier blocks, then a greedy tail to k elements."""
    trace = []
    step = 0
    A0 = 0
    blocks = []
    for b in range(tau):
        X = 0
        cur = 0.0
        while size(X) < block_size:
            x, v = _best_addition(f, ground & ~(A0 | X), X, cur)
            if x is None:
                raise PreconditionError("ground set exhausted inside a block")
            X |= bit(x)
            cur = v
            step += 1
            trace.append(TraceStep(step, (x,), f"block{b + 1}"))
        A0 |= X
        blocks.append(X)
    A1 = 0
    cur = 0.0
    while size(A1) < k - tau * block_size:
        x, v = _best_addition(f, ground & ~(A0 | A1), A1, cur)
        if x is None:
            raise PreconditionError("ground set exhausted in the tail")
        A1 |= bit(x)
        cur = v
        step += 1
        trace.append(TraceStep(step, (x,), "tail"))
    return A0, A1, blocks, trace


def blocks_greedy(f: SubmodularOracle, ground: int, k: int, tau: int,
                  tau_prime: int | None = None) -> RobustResult:
    """tau disjoint greedy blocks of ceil(tau log k) elements, then a
    fresh greedy tail.

    The adversary cannot hit every block and the surviving blocks hold a
    constant fraction of the tail's value. Intended regime is
    tau <= sqrt(k / log k) (natural log); pass ``tau_prime`` to override
    the total block budget (block size becomes ceil(tau_prime / tau), and
    the regime check is skipped).
    """
    require_submodular(f)
    if tau < 1:
        raise PreconditionError("needs tau >= 1")
    if k > size(ground):
        raise PreconditionError("k exceeds the candidate ground set")
    if tau_prime is None:
        if tau * tau * math.log(k) > k + EPS_CMP:
            raise PreconditionError(
                "outside the supported regime tau <= sqrt(k / log k)")
        block_size = math.ceil(tau * math.log(k))
    else:
        block_size = -(-tau_prime // tau)
    if tau * block_size >= k:
        raise PreconditionError("block budget must stay below k")
    q0 = f.query_count
    A0, A1, blocks, trace = _blocks_phase(f, ground, k, tau, block_size)
    info = {"blocks": tuple(blocks), "tail": A1}
    return _finalize(f, A0 | A1, tau, trace, q0, info=info)


# ---------------------------------------------------------------------------
# Constant tau scheme with a pluggable multi-objective subsolver
# ---------------------------------------------------------------------------


class BruteForceMultiObjectiveSolver:
    """Exhaustive subsolver: exact (guarantee factor 1), desk scale only.

    Finds a set of the requested size meeting every target, or returns
    None as a definitive certificate that no such set exists.
    """

    rho = 1.0

    def __init__(self, budget: int = bruteforce.DEFAULT_SUBSET_BUDGET):
        self.budget = budget

    def __call__(self, fs, targets, set_size: int,
                 candidates: int | None = None) -> int | None:
        fs = list(fs)
        targets = [float(t) for t in targets]
        if candidates is None:
            candidates = full_mask(fs[0].n)
        if set_size > size(candidates):
            return None
        work = comb(size(candidates), set_size) * max(len(fs), 1)
        if work > self.budget:
            raise BudgetExceededError(
                f"subsolver needs {work} evaluations, over {self.budget}")
        for X in subsets_of_size(candidates, set_size):
            if all(f(X) >= t - EPS_CMP for f, t in zip(fs, targets)):
                return X
        return None


def brute_multiobjective_solver(fs, targets, set_size: int,
                                candidates: int | None = None,
                                budget: int = bruteforce.DEFAULT_SUBSET_BUDGET
                                ) -> int | None:
    """Functional form of :class:`BruteForceMultiObjectiveSolver`."""
    return BruteForceMultiObjectiveSolver(budget)(fs, targets, set_size,
                                                  candidates)


def constant_tau_scheme(f: SubmodularOracle, ground: int, k: int, tau: int,
                        solver=None, delta: float = 0.05) -> RobustResult:
    """Robustify via a multi-objective subsolver and a binary search on
    the optimum estimate.

    Builds a 3 tau^2 prefix with the disjoint-blocks construction, forms
    one restricted objective f(. | Y) for every subset Y of the prefix
    missing at most tau elements, brackets the robust optimum by the
    blocks run's surviving value lb and ub = lb / 0.387, and binary
    searches the largest estimate the subsolver can certify, keeping the
    subsolver's set of size k - 3 tau^2. Terminates once the bracket is
    within delta * lb, in at most 1/log(1 + delta) solver rounds.
    """
    require_submodular(f)
    if solver is None:
        solver = BruteForceMultiObjectiveSolver()
    if tau < 1:
        raise PreconditionError("needs tau >= 1")
    if not 0.0 < delta < 1.0:
        raise PreconditionError("delta must lie in (0, 1)")
    prefix = 3 * tau * tau
    if k <= prefix + tau:
        raise PreconditionError(f"needs k > 3 tau^2 + tau = {prefix + tau}")
    if k > size(ground):
        raise PreconditionError("k exceeds the candidate ground set")
    q0 = f.query_count
    A0, A1_blocks, _, trace = _blocks_phase(f, ground, k, tau, 3 * tau)
    lb = bruteforce.robust_value(f, A0 | A1_blocks, tau)
    ub = lb / 0.387
    family = []
    for drop in range(tau + 1):
        family.extend(subsets_of_size(A0, prefix - drop))
    f_y = [f(Y) for Y in family]
    fs_l = [restrict(f, Y) for Y in family]
    candidates = ground & ~A0
    set_size = k - prefix
    rounds = 0

    def attempt(target: float) -> int | None:
        nonlocal rounds
        rounds += 1
        return solver(fs_l, [target - fy for fy in f_y], set_size, candidates)

    sol = attempt(ub)
    estimate = ub
    if sol is None:
        sol = attempt(lb)
        if sol is None:
            raise InconsistentBoundsError(
                "subsolver failed at the certified lower bound")
        lo, hi = lb, ub
        while hi - lo > delta * lo:
            mid = (lo + hi) / 2.0
            got = attempt(mid)
            if got is not None:
                lo, sol = mid, got
            else:
                hi = mid
        estimate = lo
    selected = A0 | sol
    step = len(trace)
    for x in elements(sol):
        step += 1
        trace.append(TraceStep(step, (x,), "subsolver"))
    info = {
        "prefix": A0,
        "lb": lb,
        "ub": ub,
        "estimate": estimate,
        "solver_rounds": rounds,
        "family_size": len(family),
        "solver_rho": getattr(solver, "rho", None),
    }
    return _finalize(f, selected, tau, trace, q0, info=info)


# ---------------------------------------------------------------------------
# General independence systems
# ---------------------------------------------------------------------------


def general_robust(f: SubmodularOracle, system: IndependenceSystem, tau: int,
                   base=None,
                   minimizer_budget: int = bruteforce.DEFAULT_MINIMIZER_BUDGET
                   ) -> RobustResult:
    """Enumerative reduction: an alpha-approximate non-robust subroutine
    yields an alpha/(tau+1) robust algorithm on any independence system.

    Repeatedly runs the base subroutine, records its most valuable
    element z, recurses at level tau - 1 on the system restricted to sets
    containing z with z struck from the ground set, and finally returns
    the candidate with the best exact surviving value. The base must
    accept (ground, pinned) and honor the restriction; the default is
    max-marginal greedy. Query time scales as n^tau R + n^(tau+1) for a
    base costing R.
    """
    require_submodular(f)
    if tau < 0:
        raise PreconditionError("tau must be >= 0")
    if base is None:
        base = system_greedy

    def run_base(ground: int, pinned: int) -> int:
        sys_here = restrict_system(system, pinned) if pinned else system
        return base(f, sys_here, ground | pinned, pinned)

    iterations: list[dict] = []

    def solve(ground: int, pinned: int, level: int, record: bool) -> int:
        if level == 0:
            return run_base(ground, pinned)
        candidates = []
        struck = 0
        while ground & ~struck:
            G = run_base(ground & ~struck, pinned)
            fresh = G & ~pinned & ~struck
            if not fresh:
                candidates.append(G)
                break
            z, _ = _best_addition(f, fresh, 0, 0.0)
            struck |= bit(z)
            M = solve(ground & ~struck, pinned | bit(z), level - 1, False)
            candidates.append(G)
            candidates.append(M)
            if record:
                iterations.append({"G": G, "z": z, "M": M})
        if not candidates:
            candidates = [pinned]
        best = None
        best_v = -math.inf
        for S in candidates:
            v = bruteforce.minimizer(f, S, level,
                                     budget=minimizer_budget).value
            if best is None or v > best_v + EPS_CMP:
                best, best_v = S, v
        return best

    q0 = f.query_count
    selected = solve(full_mask(system.n), 0, tau, True)
    trace = tuple(
        TraceStep(i + 1, (it["z"],), "enumerate")
        for i, it in enumerate(iterations)
    )
    info = {"iterations": iterations}
    return _finalize(f, selected, tau, trace, q0, info=info)

"""Experiment harness: run algorithm matrices against exact ground truth.

A declarative JSON config names instances (by generator or file) and
algorithms (by string id); the runner executes the full cross product,
scores every output against the brute-force robust optimum where the
budget allows, and writes deterministic CSV/JSON records. A bound table
collects the finite-k guarantee formulas of the shipped algorithms.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import dataclass

from . import algorithms as alg
from . import bruteforce
from .bitsets import full_mask, size
from .errors import BudgetExceededError
from .instances import (
    Instance,
    augment_with_copies,
    gen_greedy_failure,
    gen_hardness_augment,
    gen_partial_copies,
    gen_random_coverage,
    instance_from_json,
    load_instance,
)
from .constraints import cardinality_system

# ---------------------------------------------------------------------------
# Guarantee formulas (finite-k forms; limits as k grows without bound)
# ---------------------------------------------------------------------------


def _beta_raw(eta: float, alpha: float) -> float:
    """beta without the domain guard; negative alpha yields a vacuous
    (non-positive) bound rather than an error."""
    ea = math.exp(alpha)
    return (ea - 1.0) / (ea - eta)


def greedy_alpha(k: int) -> float:
    """Finite-k factor of plain greedy on a cardinality constraint."""
    return 1.0 - (1.0 - 1.0 / k) ** k


def two_copy_bound(k: int) -> float:
    return _beta_raw(0.0, (k - 5) / (k - 1))


def copies_block_bound(k: int, tau: int) -> float:
    return _beta_raw(0.0, (k - 2 * tau * tau - 3 * tau) / (k - tau))


def copies_geometric_bound(k: int, tau: int) -> float:
    return _beta_raw(0.0, (k - 2 * tau * (math.log2(2 * tau) + 1.5)) / (k - tau))


def three_phase_bound(k: int) -> float:
    a = (k - 4) / (k - 1)
    return 0.5 - 3.0 / (2.0 * math.exp(a)) + math.exp(-a / 2.0)


def three_phase_limit() -> float:
    return 0.5 - 3.0 / (2.0 * math.e) + math.exp(-0.5)


def biobjective_bound(k: int, m: int) -> float:
    """Leading term only; the additive O(1/m) loss is not pinned to a
    constant and is deliberately omitted (flagged in the table)."""
    return _beta_raw(0.0, (k - 2 * m - 2) / k)


def blocks_limit() -> float:
    return (math.e - 1.0) / (2.0 * math.e - 1.0)


def general_bound(alpha: float, tau: int) -> float:
    return alpha / (tau + 1)


def bound_table(k_values, tau_values, m_values) -> list[dict]:
    """Numeric guarantee values per (k, tau, m) configuration.

    The min-gain tuple algorithm's row omits its unpinned additive O(1/m)
    term, marked by the ``biobjective_leading_term_only`` flag.
    """
    rows = []
    for k in k_values:
        for tau in tau_values:
            for m in m_values:
                rows.append({
                    "k": k,
                    "tau": tau,
                    "m": m,
                    "greedy_alpha": greedy_alpha(k),
                    "two_copy": two_copy_bound(k) if k > 1 else None,
                    "three_phase": three_phase_bound(k) if k > 1 else None,
                    "copies_block": copies_block_bound(k, tau) if tau >= 1 else None,
                    "copies_geometric": (
                        copies_geometric_bound(k, tau) if tau >= 1 else None),
                    "biobjective": biobjective_bound(k, m),
                    "biobjective_leading_term_only": True,
                    "blocks_limit": blocks_limit(),
                    "three_phase_limit": three_phase_limit(),
                    "general": general_bound(greedy_alpha(k), tau),
                })
    return rows


# ---------------------------------------------------------------------------
# Registries
# ---------------------------------------------------------------------------


def _gen_augmented_coverage(params: dict, seed: int | None) -> Instance:
    base = gen_random_coverage(
        n=params["n"], universe=params["universe"],
        density=params["density"], seed=seed if seed is not None else 0,
        k=params["k"], tau=params["tau"])
    inst, _ = augment_with_copies(base, params.get("copies", max(base.tau, 1)))
    return inst


def _gen_hardness(params: dict, seed: int | None) -> Instance:
    base = gen_random_coverage(
        n=params["n"], universe=params["universe"],
        density=params["density"], seed=seed if seed is not None else 0,
        k=params["k"], tau=0)
    return gen_hardness_augment(base, params["tau_new"])


GENERATORS = {
    "greedy-failure": lambda p, seed: gen_greedy_failure(p["k"]),
    "partial-copies": lambda p, seed: gen_partial_copies(p["k"]),
    "random-coverage": lambda p, seed: gen_random_coverage(
        n=p["n"], universe=p["universe"], density=p["density"],
        seed=seed if seed is not None else p.get("seed", 0),
        k=p["k"], tau=p["tau"]),
    "augmented-coverage": _gen_augmented_coverage,
    "hardness-augment": _gen_hardness,
}


def _run_greedy(inst, params):
    return alg.greedy(inst.oracle, full_mask(inst.n), inst.k, tau=inst.tau)


def _run_threshold(inst, params):
    return alg.greedy_threshold(inst.oracle, full_mask(inst.n), inst.k,
                                eps=params.get("eps", 0.1), tau=inst.tau)


def _run_topk(inst, params):
    return alg.naive_topk(inst.oracle, full_mask(inst.n), inst.k, tau=inst.tau)


def _run_biobjective(inst, params):
    return alg.biobjective_robust(inst.oracle, full_mask(inst.n), inst.k,
                                  m=params.get("m", 2))


def _run_blocks(inst, params):
    return alg.blocks_greedy(inst.oracle, full_mask(inst.n), inst.k, inst.tau,
                             tau_prime=params.get("tau_prime"))


def _run_constant_tau(inst, params):
    return alg.constant_tau_scheme(inst.oracle, full_mask(inst.n), inst.k,
                                   inst.tau, delta=params.get("delta", 0.05))


def _run_general(inst, params):
    system = inst.system or cardinality_system(inst.n, inst.k)
    return alg.general_robust(inst.oracle, system, inst.tau)


ALGORITHMS = {
    "greedy": _run_greedy,
    "greedy-threshold": _run_threshold,
    "naive-topk": _run_topk,
    "two-copy": lambda inst, p: alg.two_copy(inst),
    "copies-block": lambda inst, p: alg.copies_block(inst),
    "copies-geometric": lambda inst, p: alg.copies_geometric(inst),
    "ignore-first": lambda inst, p: alg.ignore_first(
        inst.oracle, full_mask(inst.n), inst.k),
    "three-phase": lambda inst, p: alg.three_phase(
        inst.oracle, full_mask(inst.n), inst.k),
    "biobjective": _run_biobjective,
    "blocks": _run_blocks,
    "constant-tau": _run_constant_tau,
    "general": _run_general,
}


# ---------------------------------------------------------------------------
# Experiment runner
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("instance", "algorithm", "params", "k", "tau", "f", "g",
               "opt", "ratio", "queries", "ms")


@dataclass
class RunRecord:
    instance: str
    algorithm: str
    params: str
    k: int
    tau: int
    f_value: float | None
    g_value: float | None
    opt_value: float | str | None
    ratio: float | None
    queries: int | None
    ms: float
    trace_digest: str = ""
    error: str = ""

    def csv_row(self) -> list:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return v

        return [self.instance, self.algorithm, self.params, self.k, self.tau,
                fmt(self.f_value), fmt(self.g_value), fmt(self.opt_value),
                fmt(self.ratio), fmt(self.queries), f"{self.ms:.3f}"]


def _params_str(params: dict) -> str:
    return " ".join(f"{k}={params[k]}" for k in sorted(params))


def _trace_digest(result) -> str:
    payload = repr([(s.step, s.added, s.rule) for s in result.trace])
    payload += f"|{result.selected:x}|{result.queries}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class ExperimentConfig:
    """Declarative description of an instance x algorithm matrix.

    ``blocks`` is a list of (instances, algorithms) groups; the cross
    product runs within each group. Budgets bound the brute-force work
    per record.
    """

    blocks: list[tuple[list[Instance], list[dict]]]
    opt_budget: int = bruteforce.DEFAULT_OPT_BUDGET
    minimizer_budget: int = bruteforce.DEFAULT_MINIMIZER_BUDGET

    @staticmethod
    def _build_instances(specs, base_dir=None) -> list[Instance]:
        out = []
        for spec in specs:
            if "path" in spec:
                out.append(load_instance(spec["path"]))
                continue
            if "json" in spec:
                out.append(instance_from_json(spec["json"]))
                continue
            gen = spec.get("generator")
            if gen not in GENERATORS:
                raise ValueError(f"unknown generator {gen!r}")
            params = spec.get("params", {})
            seeds = spec.get("seeds", [None])
            for seed in seeds:
                out.append(GENERATORS[gen](params, seed))
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        raw_blocks = d.get("runs") or [d]
        blocks = []
        for b in raw_blocks:
            instances = cls._build_instances(b.get("instances", []))
            algos = []
            for a in b.get("algorithms", []):
                if a["id"] not in ALGORITHMS:
                    raise ValueError(f"unknown algorithm id {a['id']!r}")
                algos.append({"id": a["id"], "params": a.get("params", {})})
            blocks.append((instances, algos))
        budgets = d.get("budget", {})
        if budgets.get("opt", 1) <= 0 or budgets.get("minimizer", 1) <= 0:
            raise ValueError("budgets must be positive")
        return cls(
            blocks=blocks,
            opt_budget=budgets.get("opt", bruteforce.DEFAULT_OPT_BUDGET),
            minimizer_budget=budgets.get(
                "minimizer", bruteforce.DEFAULT_MINIMIZER_BUDGET),
        )


def run_experiment(config, out_dir=None) -> list[RunRecord]:
    """Execute the configured matrix; returns records sorted
    deterministically (instance, algorithm, params).

    The robust optimum is computed once per instance; exceeding the
    brute-force budget marks the row "budget-exceeded" instead of failing
    the run. Each algorithm runs on its own oracle clone, so query counts
    are per-run.
    """
    if isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)
    records = []
    opt_cache: dict[str, float | str] = {}
    for instances, algos in config.blocks:
        for inst in instances:
            if inst.label not in opt_cache:
                try:
                    opt_cache[inst.label] = bruteforce.opt_robust(
                        inst.fresh(), budget=config.opt_budget)[1]
                except BudgetExceededError:
                    opt_cache[inst.label] = "budget-exceeded"
            opt = opt_cache[inst.label]
            for spec in algos:
                run = inst.fresh()
                t0 = time.perf_counter()
                try:
                    result = ALGORITHMS[spec["id"]](run, spec["params"])
                    ms = (time.perf_counter() - t0) * 1000.0
                    ratio = None
                    if isinstance(opt, float) and result.g_value is not None:
                        ratio = result.g_value / opt if opt > 0 else None
                    records.append(RunRecord(
                        instance=inst.label, algorithm=spec["id"],
                        params=_params_str(spec["params"]),
                        k=inst.k, tau=inst.tau,
                        f_value=result.f_value, g_value=result.g_value,
                        opt_value=opt, ratio=ratio, queries=result.queries,
                        ms=ms, trace_digest=_trace_digest(result)))
                except Exception as exc:  # per-row, not fatal
                    ms = (time.perf_counter() - t0) * 1000.0
                    records.append(RunRecord(
                        instance=inst.label, algorithm=spec["id"],
                        params=_params_str(spec["params"]),
                        k=inst.k, tau=inst.tau,
                        f_value=None, g_value=None, opt_value=None,
                        ratio=None, queries=None, ms=ms,
                        error=f"{type(exc).__name__}: {exc}"))
    records.sort(key=lambda r: (r.instance, r.algorithm, r.params))
    if out_dir is not None:
        write_outputs(records, out_dir)
    return records


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def write_outputs(records, out_dir) -> None:
    import pathlib

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "records.csv").write_text(records_to_csv(records))
    payload = [
        {
            "instance": r.instance, "algorithm": r.algorithm,
            "params": r.params, "k": r.k, "tau": r.tau, "f": r.f_value,
            "g": r.g_value, "opt": r.opt_value, "ratio": r.ratio,
            "queries": r.queries, "ms": r.ms,
            "trace_digest": r.trace_digest, "error": r.error,
        }
        for r in records
    ]
    (out / "records.json").write_text(json.dumps(payload, indent=1))


def csv_without_timing(csv_text: str) -> str:
    """Drop the wall-time column; the rest must reproduce byte-identically."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in csv.reader(io.StringIO(csv_text)):
        w.writerow(row[:-1])
    return buf.getvalue()

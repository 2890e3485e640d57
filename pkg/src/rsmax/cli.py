"""Command-line harness.

Subcommands: ``gen`` (write an instance JSON), ``run`` (execute an
experiment config), ``verify`` (exact checks on an instance), ``bounds``
(guarantee table), ``conjecture`` (empirical tuple-deficit scan).

Exit codes: 0 success, 1 a verification-mode check failed, 2 bad
configuration or arguments. The RSMAX_BUDGET environment variable
overrides the brute-force evaluation budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bruteforce
from .bitsets import full_mask, mask_of
from .errors import BudgetExceededError, PreconditionError
from .harness import GENERATORS, bound_table, run_experiment
from .instances import (
    augment_with_copies,
    gen_hardness_augment,
    load_instance,
    save_instance,
)


def _budget(default: int) -> int:
    raw = os.environ.get("RSMAX_BUDGET")
    if raw:
        return int(raw)
    return default


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _cmd_gen(args) -> int:
    params = dict(
        k=args.k, tau=args.tau, n=args.n, universe=args.universe,
        density=args.density, copies=args.copies, tau_new=args.tau_new,
    )
    params = {k: v for k, v in params.items() if v is not None}
    if args.generator in ("augment-copies",):
        if not args.input:
            print("augment-copies needs a base instance via -i", file=sys.stderr)
            return 2
        inst, _ = augment_with_copies(load_instance(args.input),
                                      args.copies or 1)
    elif args.generator == "hardness-augment" and args.input:
        inst = gen_hardness_augment(load_instance(args.input),
                                    args.tau_new or 1)
    elif args.generator in GENERATORS:
        inst = GENERATORS[args.generator](params, args.seed)
    else:
        print(f"unknown generator {args.generator!r}", file=sys.stderr)
        return 2
    save_instance(inst, args.output)
    print(f"wrote {inst.label} -> {args.output}")
    return 0


def _cmd_run(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    budget = os.environ.get("RSMAX_BUDGET")
    if budget:
        config.setdefault("budget", {})
        config["budget"]["opt"] = int(budget)
        config["budget"]["minimizer"] = int(budget)
    records = run_experiment(config, out_dir=args.output)
    errors = [r for r in records if r.error]
    print(f"{len(records)} records -> {args.output}"
          f" ({len(errors)} with errors)")
    return 0


def _cmd_verify(args) -> int:
    inst = load_instance(args.input)
    opt_budget = _budget(bruteforce.DEFAULT_OPT_BUDGET)
    min_budget = _budget(bruteforce.DEFAULT_MINIMIZER_BUDGET)
    out: dict = {"instance": inst.label, "check": args.check}
    ok = True
    if args.check == "minimizer":
        if args.set is None:
            print("minimizer needs --set", file=sys.stderr)
            return 2
        A = mask_of(_ints(args.set))
        mr = bruteforce.minimizer(inst.oracle, A, inst.tau, budget=min_budget)
        out.update(removed=sorted(mask_to_list(mr.removed)), value=mr.value)
    elif args.check == "opt":
        mask, value = bruteforce.opt_robust(inst, budget=opt_budget)
        out.update(optimal=sorted(mask_to_list(mask)), value=value)
    elif args.check == "chain":
        X = mask_of(_ints(args.x)) if args.x else 0
        ok = bruteforce.check_opt_removal_chain(inst, X, budget=opt_budget)
        out.update(x=sorted(mask_to_list(X)), holds=ok)
    else:
        print(f"unknown check {args.check!r}", file=sys.stderr)
        return 2
    print(json.dumps(out, indent=1))
    return 0 if ok else 1


def mask_to_list(mask: int) -> list[int]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


def _cmd_bounds(args) -> int:
    rows = bound_table(_ints(args.k), _ints(args.tau), _ints(args.m))
    cols = ["k", "tau", "m", "greedy_alpha", "two_copy", "three_phase",
            "copies_block", "copies_geometric", "biobjective", "general",
            "blocks_limit", "three_phase_limit"]
    print("  ".join(f"{c:>18}" for c in cols))
    for r in rows:
        cells = []
        for c in cols:
            v = r[c]
            cells.append(f"{v:>18.6f}" if isinstance(v, float) else f"{v!s:>18}")
        print("  ".join(cells))
    return 0


def _cmd_conjecture(args) -> int:
    report = bruteforce.conjecture_scan(args.l, args.trials, args.k_max,
                                        args.seed)
    text = json.dumps(report, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote report -> {args.output} (max_c={report['max_c']:.4f})")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rsmax",
        description="Robust monotone submodular maximization harness.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance JSON")
    g.add_argument("generator")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("-i", "--input", help="base instance for augmentations")
    g.add_argument("--k", type=int)
    g.add_argument("--tau", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--universe", type=int)
    g.add_argument("--density", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--copies", type=int)
    g.add_argument("--tau-new", dest="tau_new", type=int)
    g.set_defaults(fn=_cmd_gen)

    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("-c", "--config", required=True)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(fn=_cmd_run)

    v = sub.add_parser("verify", help="exact checks on an instance")
    v.add_argument("check", choices=["minimizer", "opt", "chain"])
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--set", help="comma-separated element ids")
    v.add_argument("--x", help="comma-separated barred element ids")
    v.set_defaults(fn=_cmd_verify)

    b = sub.add_parser("bounds", help="guarantee table")
    b.add_argument("--k", required=True)
    b.add_argument("--tau", default="1")
    b.add_argument("--m", default="2")
    b.set_defaults(fn=_cmd_bounds)

    c = sub.add_parser("conjecture", help="empirical tuple-deficit scan")
    c.add_argument("--l", type=int, default=3)
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--k-max", dest="k_max", type=int, default=8)
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("-o", "--output")
    c.set_defaults(fn=_cmd_conjecture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError, PreconditionError,
            BudgetExceededError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

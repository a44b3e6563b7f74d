"""Command-line front door: generate instances, run detection/bench/optimize/
adversary jobs, and emit machine-readable JSON/CSV artifacts.

Identical arguments and seed always produce byte-identical outputs; any
invariant violation exits nonzero with a diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import analysis
from .adversary import (
    adversary_value,
    barrier_check,
    certificate_size,
    decomposition_diagnostic,
    load_function,
    load_matrix,
    validate_gamma,
)
from .graphs import GENERATOR_KINDS, generate, load_graph, save_graph
from .oracle import BudgetExceededError, QueryOracle, StepTag
from .rng import derive_seed
from .solver import Params, solve

_GEN_CHOICES = sorted(GENERATOR_KINDS)


def _write_json(path: str | None, obj: dict) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=3.0 / 7.0)
    parser.add_argument("--epsilon-prime", type=float, default=1.0 / 7.0)
    parser.add_argument("--delta", type=float, default=1.0 / 7.0)
    parser.add_argument("--c-safe", type=float, default=2.0)
    parser.add_argument("--c0", type=float, default=6.0)


def _params_from(args: argparse.Namespace) -> Params:
    return Params(
        epsilon=args.epsilon,
        epsilon_prime=args.epsilon_prime,
        delta=args.delta,
        c_safe=args.c_safe,
        c0=args.c0,
    )


def _cmd_gen_graph(args: argparse.Namespace) -> int:
    graph = generate(args.kind, args.n, args.seed, p=args.p)
    save_graph(graph, args.out)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    if args.graph:
        graph = load_graph(args.graph)
    else:
        if args.n is None:
            raise ValueError("provide --graph FILE or --n with --gen")
        graph = generate(args.gen, args.n, derive_seed(args.seed, "instance"), p=args.p)
    oracle = QueryOracle(graph, budget=args.budget)
    report = solve(oracle, _params_from(args), seed=args.seed)
    _write_json(args.out, report.to_json())
    return 0


def _bench_row(job: tuple) -> dict:
    n, trial, seed, params_tuple, kind, p = job
    params = Params(*params_tuple)
    report = analysis.run_one(n, trial, seed, params, kind, p)
    row = {
        "n": n,
        "seed": report.seed,
        "outcome": "triangle" if report.outcome else "no",
        "total": report.cost.total,
        "classical": report.cost.classical,
        "charged": report.cost.charged,
    }
    for tag in StepTag:
        row[tag.value.lower()] = report.cost.per_step[tag.value]
    return row


def _cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    params = _params_from(args)
    if args.algo == "staged":
        jobs = [
            (n, t, args.seed, (params.epsilon, params.epsilon_prime, params.delta,
                               params.c_safe, params.c0), args.gen, args.p)
            for n in sizes
            for t in range(args.trials)
        ]
        workers = int(os.environ.get("QTRI_WORKERS", "1"))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_bench_row, jobs))
        else:
            rows = [_bench_row(job) for job in jobs]
        rows.sort(key=lambda r: (r["n"], r["seed"]))
        header = ["n", "seed", "outcome", "total", "classical", "charged"] + [
            tag.value.lower() for tag in StepTag
        ]
        fit = None
        if args.out_json:
            fit = analysis.empirical_scaling(sizes, args.trials, params, args.seed, args.gen, args.p)
    else:
        rows = []
        for n in sizes:
            for t in range(args.trials):
                graph = generate(args.gen, n, derive_seed(args.seed, n, t, "graph"), p=args.p)
                run_seed = derive_seed(args.seed, n, t, "run")
                result = analysis.folklore_baseline(graph, run_seed, args.c_safe)
                rows.append(
                    {
                        "n": n,
                        "seed": run_seed,
                        "outcome": "triangle" if result.found else "no",
                        "total": result.total_queries,
                    }
                )
        rows.sort(key=lambda r: (r["n"], r["seed"]))
        header = ["n", "seed", "outcome", "total"]
        fit = None
        if args.out_json:
            fit = analysis.baseline_scaling(sizes, args.trials, args.seed, args.gen, args.p, args.c_safe)

    with open(args.out_csv, "w", encoding="ascii", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header)
        writer.writeheader()
        writer.writerows(rows)
    if fit is not None:
        _write_json(args.out_json, fit.to_json())
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    params, dominant = analysis.optimize_params(args.grid)
    _write_json(
        args.out,
        {
            "params": [params.epsilon, params.epsilon_prime, params.delta],
            "exponent": float(dominant),
            "exponent_exact": f"{dominant.numerator}/{dominant.denominator}",
            "grid": args.grid,
        },
    )
    return 0


def _cmd_lemma_checks(args: argparse.Namespace) -> int:
    sweep = analysis.disjointness_sweep()
    rate = analysis.threshold_violation_rate(
        args.n, args.epsilon, args.trials, args.seed, kind=args.gen, p=args.p
    )
    payload = {
        "disjointness_sweep": {
            "points": sweep["points"],
            "failures": sweep["failures"],
            "worst_ratio": sweep["worst_ratio"],
            "all_within": sweep["all_within"],
        },
        "containment_violation_rate": rate,
        "n": args.n,
        "trials": args.trials,
    }
    _write_json(args.out, payload)
    return 0


def _cmd_adversary(args: argparse.Namespace) -> int:
    f = load_function(args.function)
    gamma = load_matrix(args.gamma)
    problem = validate_gamma(f, gamma)
    if problem is not None:
        raise ValueError(f"invalid adversary matrix: {problem}")
    raw_ratio, qqc = adversary_value(f, gamma, args.epsilon)
    k = certificate_size(f)
    ok, slack = barrier_check(f, gamma)
    payload = {
        "raw_ratio": raw_ratio,
        "qqc_lower_bound": qqc,
        "certificate_size": k,
        "barrier": 2.0 * (f.n * k) ** 0.5,
        "slack": slack,
        "within_barrier": ok,
    }
    if args.diagnostic:
        payload["decomposition"] = decomposition_diagnostic(f, gamma)
    _write_json(args.out, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtri", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="write a generated instance in the text format")
    p.add_argument("--kind", choices=_GEN_CHOICES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("solve", help="run the detection algorithm, write a run report")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--gen", choices=_GEN_CHOICES, default="erdos_renyi")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--graph", default=None, help="read the instance from a text-format file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", default=None)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="batch runs with a CSV of costs and a scaling fit")
    p.add_argument("--sizes", required=True, help="comma-separated instance sizes")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--gen", choices=_GEN_CHOICES, default="erdos_renyi")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algo", choices=["staged", "baseline"], default="staged")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-json", default=None)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("optimize-params", help="grid-minimize the dominant cost exponent")
    p.add_argument("--grid", type=int, default=210, help="grid denominator")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("lemma-checks", help="numeric structural checks")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--gen", choices=_GEN_CHOICES, default="erdos_renyi")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--epsilon", type=float, default=3.0 / 7.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lemma_checks)

    p = sub.add_parser("adversary", help="spectral adversary ratio and certificate ceiling")
    p.add_argument("--function", required=True, help="JSON function file")
    p.add_argument("--gamma", required=True, help="JSON matrix file")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--diagnostic", action="store_true", help="include the decomposition checks")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_adversary)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, BudgetExceededError, AssertionError, ArithmeticError) as exc:
        print(f"qtri: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

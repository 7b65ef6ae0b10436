"""Command-line entry point: generation, calibration, benchmarking, features,
metrics, and the selector baseline as subcommands over JSON/CSV files.

Every subcommand writes its effective configuration (defaults included) to a
``<output>.meta`` sidecar, keeps progress chatter on stderr, and writes all
outputs atomically.  Exit codes: 0 success, 2 bad input, 1 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import AGGREGATIONS, estimate_all
from .errors import BBOBMixError, InputFormatError, ParameterError
from .features import FeatureConfig, feature_table
from .generator import problem_from_spec
from .io_utils import read_csv, read_json, write_csv, write_json, write_meta
from .metrics import auc_table, kfold_selector_scores, rank_algorithms
from .pipeline import (
    generate_specs,
    logs_to_rows,
    problem_id,
    pure_bbob_specs,
    rows_to_logs,
    run_portfolio,
)


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _effective(args: argparse.Namespace, command: str) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    cfg["command"] = command
    cfg["version"] = __version__
    return cfg


def _load_specs(path):
    specs = read_json(path)
    if not isinstance(specs, list) or not specs:
        raise InputFormatError(f"{path}: expected a nonempty JSON array of specs")
    return specs


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> None:
    if args.pure_bbob:
        specs = pure_bbob_specs(args.dim)
    else:
        specs = generate_specs(args.count, args.dim, args.threshold, args.seed)
    write_json(args.out, specs)
    write_meta(args.out, _effective(args, "generate"))
    _progress(f"generate: wrote {len(specs)} specs to {args.out}")


def cmd_bench(args) -> None:
    specs = _load_specs(args.instances)
    logs = run_portfolio(
        specs,
        budget=args.budget,
        runs=args.runs,
        master_seed=args.seed,
        jobs=args.jobs,
        progress=lambda pid: _progress(f"bench: finished {pid}"),
    )
    write_csv(
        args.out,
        ("problem_id", "algorithm", "run", "eval_index", "best_precision"),
        logs_to_rows(logs),
    )
    write_meta(args.out, _effective(args, "bench"))
    _progress(f"bench: wrote {len(logs)} run logs to {args.out}")


def cmd_features(args) -> None:
    specs = _load_specs(args.instances)
    problems = [problem_from_spec(s) for s in specs]
    ids = [problem_id(i) for i in range(len(specs))]
    cfg = FeatureConfig(n_designs=args.designs, seed=args.seed)
    table = feature_table(problems, cfg, problem_ids=ids)
    header = ("problem_id", "dim") + table.columns
    rows = [
        (pid, problems[i].dim) + tuple(table.values[i])
        for i, pid in enumerate(table.problem_ids)
    ]
    write_csv(args.out, header, rows)
    write_meta(args.out, _effective(args, "features"))
    if table.dropped:
        _progress(f"features: dropped undefined columns: {', '.join(table.dropped)}")
    _progress(f"features: wrote {len(rows)} rows to {args.out}")


def cmd_metrics(args) -> None:
    _, rows = read_csv(args.runlogs)
    logs = rows_to_logs(rows)
    budgets = sorted({log.budget for log in logs})
    if len(budgets) != 1:
        raise InputFormatError(
            f"{args.runlogs}: runs disagree on budget: {budgets}"
        )
    table = auc_table(logs)
    out_dir = Path(args.out)
    auc_path = out_dir / "auc_table.csv"
    write_csv(auc_path, ("problem_id", "algorithm", "auc"), table)
    write_meta(auc_path, _effective(args, "metrics"))

    ranks = rank_algorithms(table)
    rank_rows = [
        (pid, alg, rank)
        for pid in sorted(ranks)
        for alg, rank in sorted(ranks[pid].items())
    ]
    ranks_path = out_dir / "ranks.csv"
    write_csv(ranks_path, ("problem_id", "algorithm", "rank"), rank_rows)
    write_meta(ranks_path, _effective(args, "metrics"))
    _progress(f"metrics: wrote {auc_path} and {ranks_path}")


def cmd_calibrate(args) -> None:
    dims = [int(d) for d in args.dims.split(",") if d]
    if not dims:
        raise ParameterError("dims: expected a comma-separated list of integers")
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 3]))
    rows = estimate_all(dims, args.n, args.agg, rng)
    write_csv(
        args.out,
        ("fid", "dim", "n", "aggregation", "factor"),
        [(fid, dim, args.n, args.agg, factor) for fid, dim, factor in rows],
    )
    write_meta(args.out, _effective(args, "calibrate"))
    _progress(f"calibrate: wrote {len(rows)} rows to {args.out}")


def cmd_select(args) -> None:
    specs = _load_specs(args.instances)
    ids = [problem_id(i) for i in range(len(specs))]
    weights = np.array([s["weights"] for s in specs], dtype=float)

    feat_header, feat_rows = read_csv(args.features)
    feature_cols = [c for c in feat_header if c not in ("problem_id", "dim")]
    by_pid = {r["problem_id"]: r for r in feat_rows}
    missing = [pid for pid in ids if pid not in by_pid]
    if missing:
        raise InputFormatError(f"{args.features}: missing rows for {missing[:5]}")
    ela = np.array(
        [[float(by_pid[pid][c]) for c in feature_cols] for pid in ids]
    )

    _, auc_rows = read_csv(args.auc)
    table = [
        (r["problem_id"], r["algorithm"], float(r["auc"])) for r in auc_rows
    ]

    report, losses = kfold_selector_scores(
        {"weights": weights, "ela": ela}, ids, table, folds=args.folds
    )
    out_dir = Path(args.out)
    report_path = out_dir / "selector_report.csv"
    write_csv(report_path, ("representation", "weighted_f1", "mean_loss"), report)
    write_meta(report_path, _effective(args, "select"))
    loss_rows = [
        (name, pid, loss)
        for name in sorted(losses)
        for pid, loss in sorted(losses[name].items())
    ]
    losses_path = out_dir / "selector_losses.csv"
    write_csv(losses_path, ("representation", "problem_id", "loss"), loss_rows)
    write_meta(losses_path, _effective(args, "select"))
    for name, f1, mean_loss in report:
        _progress(f"select: {name}: weighted_f1={f1:.4f} mean_loss={mean_loss:.4f}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbobmix",
        description="Affine mixtures of the 24 BBOB functions: generate problems, "
        "calibrate scale factors, extract landscape features, benchmark a "
        "5-algorithm portfolio, and compute ECDF/AUC metrics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance-spec JSON file")
    g.add_argument("--count", type=int, default=1, help="number of problems")
    g.add_argument("--dim", type=int, default=5, help="problem dimension")
    g.add_argument("--threshold", type=float, default=0.85,
                   help="weight-sampling threshold T")
    g.add_argument("--seed", type=int, default=0, help="master seed")
    g.add_argument("--pure-bbob", action="store_true",
                   help="emit the 24x5 one-hot set instead of random mixtures")
    g.add_argument("--out", required=True, help="output JSON path")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="run the 5-algorithm portfolio")
    b.add_argument("--instances", required=True, help="instance-spec JSON file")
    b.add_argument("--budget", type=int, default=10000,
                   help="evaluations per run")
    b.add_argument("--runs", type=int, default=50, help="runs per (problem, algorithm)")
    b.add_argument("--seed", type=int, default=0, help="master seed")
    b.add_argument("--jobs", type=int, default=1,
                   help="worker processes (results are identical for any value)")
    b.add_argument("--out", required=True, help="output run-log CSV path")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("features", help="compute landscape features")
    f.add_argument("--instances", required=True, help="instance-spec JSON file")
    f.add_argument("--seed", type=int, default=0, help="design seed")
    f.add_argument("--designs", type=int, default=5,
                   help="scrambled Sobol' designs to average over "
                        "(the initial all-zeros Sobol' point is retained)")
    f.add_argument("--out", required=True, help="output feature CSV path")
    f.set_defaults(func=cmd_features)

    m = sub.add_parser("metrics", help="AUC table and per-problem ranks")
    m.add_argument("--runlogs", required=True, help="run-log CSV from bench")
    m.add_argument("--out", required=True,
                   help="output directory for auc_table.csv and ranks.csv")
    m.set_defaults(func=cmd_metrics)

    c = sub.add_parser("calibrate", help="estimate per-function scale factors")
    c.add_argument("--dims", default="2,3,5,10",
                   help="comma-separated dimensions to sample")
    c.add_argument("--n", type=int, default=50000, help="samples per (fid, dim)")
    c.add_argument("--agg", choices=AGGREGATIONS, default="midrange",
                   help="aggregation of log-precision samples")
    c.add_argument("--seed", type=int, default=0, help="sampling seed")
    c.add_argument("--out", required=True, help="output CSV path")
    c.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("select", help="cross-validated 1-NN selector baseline")
    s.add_argument("--instances", required=True, help="instance-spec JSON file")
    s.add_argument("--features", required=True, help="feature CSV from features")
    s.add_argument("--auc", required=True, help="auc_table.csv from metrics")
    s.add_argument("--folds", type=int, default=10, help="cross-validation folds")
    s.add_argument("--out", required=True,
                   help="output directory for selector_report.csv and "
                        "selector_losses.csv")
    s.set_defaults(func=cmd_select)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ParameterError, InputFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BBOBMixError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

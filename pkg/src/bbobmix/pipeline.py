"""End-to-end orchestration shared by the CLI and the test harness.

Seeding scheme: every piece of work gets a seed of the form
``SeedSequence([master_seed, stream, *indices])`` where the stream constant
identifies the purpose (0 = problem generation, 1 = benchmark runs,
2 = feature designs).  Any subset of the work is therefore reproducible in
isolation, and parallel execution cannot change results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .generator import (
    GeneratorConfig,
    make_problem,
    one_hot,
    problem_from_spec,
    problem_to_spec,
    random_problem,
)
from .optimizers import RunLog, portfolio, run
from .suite import make_instance

STREAM_GENERATE = 0
STREAM_BENCH = 1
STREAM_FEATURES = 2


def seed_for(master_seed: int, stream: int, *indices: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master_seed), int(stream), *map(int, indices)])


def problem_id(index: int) -> str:
    """Positional id used in all CSV outputs for the i-th spec in a file."""
    return f"p{index:04d}"


def generate_specs(count: int, dim: int, threshold: float, seed: int) -> list[dict]:
    """Random mixture specs; spec i depends only on (seed, i)."""
    cfg = GeneratorConfig(dim=dim, threshold=threshold, seed=seed, count=count)
    specs = []
    for i in range(count):
        rng = np.random.default_rng(seed_for(seed, STREAM_GENERATE, i))
        problem = random_problem(rng, cfg)
        specs.append(problem_to_spec(problem, seed=seed))
    return specs


def pure_bbob_specs(dim: int, instances_per_function: int = 5) -> list[dict]:
    """One-hot specs for every function id, optimum kept at its original spot."""
    specs = []
    for fid in range(1, 25):
        for iid in range(1, instances_per_function + 1):
            inst = make_instance(fid, iid, dim)
            problem = make_problem(
                one_hot(fid),
                np.full(24, iid, dtype=int),
                inst.x_opt,
                dim,
            )
            specs.append(problem_to_spec(problem, seed=0))
    return specs


def _bench_one_problem(args):
    spec, pid, budget, runs, master_seed, p_index = args
    problem = problem_from_spec(spec)
    algs = portfolio()
    logs = []
    for a_index, alg in enumerate(algs):
        for r_index in range(runs):
            seed = seed_for(master_seed, STREAM_BENCH, p_index, a_index, r_index)
            logs.append(
                run(alg, problem, budget, seed, problem_id=pid, run_index=r_index)
            )
    return logs


def run_portfolio(
    specs: list[dict],
    budget: int,
    runs: int,
    master_seed: int,
    jobs: int = 1,
    progress=None,
) -> list[RunLog]:
    """All portfolio runs over all specs; deterministic for any job count."""
    tasks = [
        (spec, problem_id(i), budget, runs, master_seed, i)
        for i, spec in enumerate(specs)
    ]
    all_logs: list[RunLog] = []
    if jobs <= 1:
        for t in tasks:
            all_logs.extend(_bench_one_problem(t))
            if progress:
                progress(t[1])
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for t, logs in zip(tasks, pool.map(_bench_one_problem, tasks, chunksize=1)):
                all_logs.extend(logs)
                if progress:
                    progress(t[1])
    return all_logs


def logs_to_rows(logs: list[RunLog]):
    """Flatten run logs into CSV rows.

    Improvement events are followed by one terminal row at the full budget
    (skipped when the final improvement already happened there), so the
    budget is recoverable from the file.
    """
    rows = []
    for log in logs:
        for ev, prec in log.events:
            rows.append((log.problem_id, log.algorithm_id, log.run_index, ev, prec))
        last_ev, last_prec = log.events[-1]
        if last_ev != log.budget:
            rows.append(
                (log.problem_id, log.algorithm_id, log.run_index, log.budget, last_prec)
            )
    return rows


def rows_to_logs(rows) -> list[RunLog]:
    """Rebuild run logs from CSV rows (inverse of :func:`logs_to_rows`)."""
    from collections import defaultdict

    from .errors import InputFormatError

    grouped: dict[tuple[str, str, int], list[tuple[int, float]]] = defaultdict(list)
    for r in rows:
        try:
            key = (r["problem_id"], r["algorithm"], int(r["run"]))
            grouped[key].append((int(r["eval_index"]), float(r["best_precision"])))
        except (KeyError, ValueError) as exc:
            raise InputFormatError(f"run-log row {r!r}: {exc}") from exc

    logs = []
    for (pid, alg, run_index), pairs in sorted(grouped.items()):
        pairs.sort()
        budget = pairs[-1][0]
        events = []
        best = float("inf")
        for ev, prec in pairs:
            if prec < best:
                best = prec
                events.append((ev, prec))
        logs.append(
            RunLog(
                problem_id=pid,
                algorithm_id=alg,
                run_index=run_index,
                budget=budget,
                events=tuple(events),
                evals_used=budget,
            )
        )
    return logs

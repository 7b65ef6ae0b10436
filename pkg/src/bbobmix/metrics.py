"""Fixed-budget performance metrics and a nearest-neighbor selector baseline.

Performance is summarized by the normalized area under the ECDF over 51
log-spaced precision targets from 1e2 down to 1e-8.  With a linear evaluation
axis the AUC has a closed form per run: the average over targets of
(B - firstHit + 1)/B, zero for targets never hit.  That equals the mean of
hit indicators over the full (targets x evaluations) grid, which the tests
exploit as a brute-force oracle.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np
from scipy.stats import rankdata

from .errors import ParameterError
from .optimizers import RunLog

N_TARGETS = 51


def targets() -> np.ndarray:
    """51 precision targets from 1e2 down to 1e-8, log-spaced, endpoints exact."""
    t = 10.0 ** np.linspace(2.0, -8.0, N_TARGETS)
    t[0], t[-1] = 1e2, 1e-8
    return t


def auc(logs: list[RunLog], target_set: np.ndarray | None = None) -> float:
    """Normalized ECDF area for one (problem, algorithm) group of runs.

    For each run and target: (B - firstHit + 1)/B if the target was hit,
    else 0; averaged over runs and targets.  Lies in [0, 1].
    """
    if not logs:
        raise ParameterError("logs: need at least one run log")
    t = targets() if target_set is None else np.asarray(target_set, dtype=float)
    budgets = {log.budget for log in logs}
    if len(budgets) != 1:
        raise ParameterError(f"logs: runs must share one budget, got {sorted(budgets)}")
    budget = budgets.pop()

    # accumulate integer "evaluations at or after the first hit" counts and
    # divide once; this makes the closed form bit-identical to brute-force
    # indicator enumeration over the (runs x targets x evals) grid
    total = 0.0
    for log in logs:
        evs = np.array([e for e, _ in log.events], dtype=float)
        prec = np.array([p for _, p in log.events], dtype=float)
        # precisions are strictly decreasing; first hit of target tau is the
        # earliest event with precision <= tau
        hit_idx = np.searchsorted(-prec, -t, side="left")
        hit = hit_idx < len(prec)
        first = evs[np.minimum(hit_idx, len(prec) - 1)]
        total += np.sum(np.where(hit, budget - first + 1.0, 0.0))
    return float(total / (len(logs) * len(t) * budget))


def auc_table(logs: list[RunLog], target_set: np.ndarray | None = None):
    """Group logs by (problem, algorithm) and compute one AUC per group.

    Returns a list of (problem_id, algorithm_id, auc) rows sorted by key.
    """
    groups: dict[tuple[str, str], list[RunLog]] = defaultdict(list)
    for log in logs:
        groups[(log.problem_id, log.algorithm_id)].append(log)
    return [
        (pid, alg, auc(group, target_set))
        for (pid, alg), group in sorted(groups.items())
    ]


def rank_algorithms(table) -> dict[str, dict[str, float]]:
    """Per-problem ranks from an AUC table (rows of (problem, algorithm, auc)).

    Rank 1 is the highest AUC; ties share the mean of the covered ranks.
    Every problem must have a row for every algorithm appearing in the table.
    """
    problems: dict[str, dict[str, float]] = defaultdict(dict)
    algorithms = set()
    for pid, alg, value in table:
        problems[pid][alg] = float(value)
        algorithms.add(alg)
    ranks: dict[str, dict[str, float]] = {}
    for pid, cells in problems.items():
        missing = algorithms - set(cells)
        if missing:
            raise ParameterError(
                f"rank: problem {pid!r} missing algorithms {sorted(missing)}"
            )
        algs = sorted(cells)
        values = np.array([cells[a] for a in algs])
        r = rankdata(-values, method="average")
        ranks[pid] = dict(zip(algs, r.tolist()))
    return ranks


def best_algorithm(table) -> dict[str, str]:
    """Per-problem argmax-AUC labels; AUC ties broken by algorithm name."""
    best: dict[str, tuple[float, str]] = {}
    for pid, alg, value in sorted(table):
        cur = best.get(pid)
        if cur is None or value > cur[0]:
            best[pid] = (float(value), alg)
    return {pid: alg for pid, (_, alg) in best.items()}


def knn_select(train_features, train_labels, query, train_problem_ids=None) -> str:
    """1-nearest-neighbor label lookup (Euclidean).

    Distance ties resolve to the row with the lowest problem id (row order
    when no ids are given).
    """
    X = np.asarray(train_features, dtype=float)
    q = np.asarray(query, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise ParameterError("train_features: need a nonempty 2-D array")
    if len(train_labels) != len(X):
        raise ParameterError("train_labels: length must match train_features")
    if q.shape != (X.shape[1],):
        raise ParameterError(
            f"query: expected shape ({X.shape[1]},), got {q.shape}"
        )
    if train_problem_ids is None:
        order = np.arange(len(X))
    else:
        order = np.argsort(np.asarray(train_problem_ids), kind="stable")
    d = np.sum((X[order] - q) ** 2, axis=1)
    return list(train_labels)[int(order[int(np.argmin(d))])]


def weighted_f1(pred, truth) -> float:
    """Per-class F1 averaged with weights proportional to true class support."""
    pred, truth = list(pred), list(truth)
    if len(pred) != len(truth):
        raise ParameterError("pred/truth: lengths differ")
    if not truth:
        raise ParameterError("pred/truth: empty input")
    classes = sorted(set(truth) | set(pred))
    total = 0.0
    for c in classes:
        tp = sum(1 for p, t in zip(pred, truth) if p == c and t == c)
        fp = sum(1 for p, t in zip(pred, truth) if p == c and t != c)
        fn = sum(1 for p, t in zip(pred, truth) if p != c and t == c)
        support = tp + fn
        if support == 0:
            continue
        f1 = 2.0 * tp / (2.0 * tp + fp + fn) if tp else 0.0
        total += support * f1
    return total / len(truth)


def kfold_selector_scores(
    representations: dict[str, np.ndarray],
    problem_ids,
    table,
    folds: int = 10,
):
    """Cross-validated 1-NN selector scores for several problem representations.

    ``representations`` maps a name to an (n_problems, n_dims) matrix aligned
    with ``problem_ids``.  Labels are the per-problem best algorithms from the
    AUC table.  Fold assignment is positional (index mod folds).  Returns a
    list of (representation, weighted_f1, mean_loss) rows plus a per-problem
    loss dict per representation.
    """
    problem_ids = list(problem_ids)
    n = len(problem_ids)
    if n < folds:
        raise ParameterError(f"folds: need at least {folds} problems, got {n}")
    labels_by_pid = best_algorithm(table)
    try:
        truth = [labels_by_pid[pid] for pid in problem_ids]
    except KeyError as exc:
        raise ParameterError(f"table: no AUC rows for problem {exc}") from exc

    report = []
    losses_by_repr = {}
    for name, X in representations.items():
        X = np.asarray(X, dtype=float)
        if X.shape[0] != n:
            raise ParameterError(
                f"representation {name!r}: {X.shape[0]} rows for {n} problems"
            )
        pred = [None] * n
        for fold in range(folds):
            test = [i for i in range(n) if i % folds == fold]
            train = [i for i in range(n) if i % folds != fold]
            for i in test:
                pred[i] = knn_select(
                    X[train],
                    [truth[j] for j in train],
                    X[i],
                    [problem_ids[j] for j in train],
                )
        f1 = weighted_f1(pred, truth)
        selected = dict(zip(problem_ids, pred))
        losses = auc_loss(selected, table)
        report.append((name, f1, float(np.mean(losses))))
        losses_by_repr[name] = dict(zip(sorted(selected), losses.tolist()))
    return report, losses_by_repr


def auc_loss(selected: dict[str, str], table) -> np.ndarray:
    """Per-problem regret of a selector: best AUC minus the selected one.

    Returned in sorted problem-id order; always nonnegative.
    """
    cells: dict[str, dict[str, float]] = defaultdict(dict)
    for pid, alg, value in table:
        cells[pid][alg] = float(value)
    losses = []
    for pid in sorted(selected):
        if pid not in cells:
            raise ParameterError(f"auc_loss: no table rows for problem {pid!r}")
        row = cells[pid]
        choice = selected[pid]
        if choice not in row:
            raise ParameterError(
                f"auc_loss: problem {pid!r} has no AUC for algorithm {choice!r}"
            )
        losses.append(max(row.values()) - row[choice])
    return np.array(losses)

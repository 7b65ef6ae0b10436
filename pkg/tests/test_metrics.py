"""Tests for targets, ECDF/AUC, ranking, and the selector primitives."""

import numpy as np
import pytest

from bbobmix.errors import ParameterError
from bbobmix.metrics import (
    auc,
    auc_loss,
    auc_table,
    best_algorithm,
    kfold_selector_scores,
    knn_select,
    rank_algorithms,
    targets,
    weighted_f1,
)
from bbobmix.optimizers import RunLog


def synthetic_log(events, budget, pid="p", alg="a", run_index=0):
    return RunLog(pid, alg, run_index, budget, tuple(events), budget)


def brute_force_auc(logs, target_set):
    """Oracle: mean of hit indicators over the full (runs, targets, evals) grid."""
    hits = 0
    budget = logs[0].budget
    for log in logs:
        best = np.full(budget + 1, np.inf)
        for ev, prec in log.events:
            best[ev:] = np.minimum(best[ev:], prec)
        for tau in target_set:
            hits += int(np.sum(best[1:] <= tau))
    return hits / (len(logs) * len(target_set) * budget)


def random_log(rng, budget, pid="p", alg="a", run_index=0):
    n_events = rng.integers(1, 12)
    evals = np.sort(rng.choice(np.arange(1, budget + 1), size=n_events, replace=False))
    evals[0] = 1
    precs = np.sort(10.0 ** rng.uniform(-9, 3, n_events))[::-1]
    return synthetic_log(list(zip(evals.tolist(), precs.tolist())), budget,
                         pid=pid, alg=alg, run_index=run_index)


class TestTargets:
    def test_count_and_endpoints(self):
        t = targets()
        assert len(t) == 51
        assert t[0] == 1e2 and t[-1] == 1e-8

    def test_midpoint(self):
        assert targets()[25] == pytest.approx(1e-3, rel=1e-12)

    def test_constant_ratio(self):
        t = targets()
        ratios = t[:-1] / t[1:]
        np.testing.assert_allclose(ratios, 10.0 ** 0.2, rtol=1e-10)


class TestAUC:
    def test_hand_example(self):
        # one run, budget 10; precision 80 at eval 6 crosses only the largest
        # target 1e2, so AUC = (10 - 6 + 1) / 10 / 51 = 5/510
        t = targets()
        log = synthetic_log([(1, 5e3), (6, 80.0)], budget=10)
        got = auc([log], t)
        assert got == pytest.approx(5.0 / 510.0, rel=1e-15)
        assert got == brute_force_auc([log], t)

    def test_all_targets_at_eval_one(self):
        log = synthetic_log([(1, 1e-8)], budget=100)
        assert auc([log]) == 1.0

    def test_never_reaching_easiest_target(self):
        log = synthetic_log([(1, 5e4), (50, 200.0)], budget=100)
        assert auc([log]) == 0.0

    def test_matches_brute_force_exactly(self):
        rng = np.random.default_rng(42)
        t = targets()
        for _ in range(100):
            budget = int(rng.integers(5, 200))
            logs = [random_log(rng, budget, run_index=r)
                    for r in range(rng.integers(1, 4))]
            assert auc(logs, t) == brute_force_auc(logs, t)

    def test_pointwise_improvement_never_decreases(self):
        rng = np.random.default_rng(43)
        t = targets()
        for _ in range(50):
            log = random_log(rng, 100)
            base = auc([log], t)
            modified = list(log.events)
            k = rng.integers(len(modified))
            ev, prec = modified[k]
            modified[k] = (ev, prec * 0.09)  # strictly better at one event
            # rebuild a valid strictly-decreasing log; its best-so-far curve
            # is pointwise <= the original's
            events, best = [], np.inf
            for e, p in modified:
                if p < best:
                    best = p
                    events.append((e, p))
            improved = synthetic_log(events, 100)
            assert auc([improved], t) >= base

    def test_errors(self):
        with pytest.raises(ParameterError):
            auc([])
        logs = [synthetic_log([(1, 1.0)], 10), synthetic_log([(1, 1.0)], 20)]
        with pytest.raises(ParameterError):
            auc(logs)


class TestRanks:
    def test_basic_order(self):
        table = [("p", "a", 0.9), ("p", "b", 0.5), ("p", "c", 0.1)]
        ranks = rank_algorithms(table)["p"]
        assert ranks == {"a": 1.0, "b": 2.0, "c": 3.0}

    def test_tie_shares_mean_rank(self):
        table = [("p", "a", 0.7), ("p", "b", 0.7), ("p", "c", 0.1)]
        ranks = rank_algorithms(table)["p"]
        assert ranks == {"a": 1.5, "b": 1.5, "c": 3.0}

    def test_rank_conservation(self):
        rng = np.random.default_rng(3)
        table = [
            (f"p{i}", alg, float(rng.random()))
            for i in range(100)
            for alg in "abcde"
        ]
        ranks = rank_algorithms(table)
        totals = np.zeros(5)
        for cells in ranks.values():
            for alg, r in cells.items():
                totals["abcde".index(alg)] += 1
        assert np.all(totals == 100)
        for cells in ranks.values():
            assert sum(cells.values()) == pytest.approx(15.0)  # 1+2+3+4+5

    def test_missing_cell(self):
        with pytest.raises(ParameterError, match="p1"):
            rank_algorithms([("p1", "a", 0.1), ("p2", "a", 0.2), ("p2", "b", 0.3)])


class TestAUCTable:
    def test_groups_runs(self):
        rng = np.random.default_rng(4)
        logs = [random_log(rng, 50, pid=p, alg=a, run_index=r)
                for p in ("p0", "p1") for a in ("x", "y") for r in range(3)]
        table = auc_table(logs)
        assert len(table) == 4
        assert all(0.0 <= row[2] <= 1.0 for row in table)


class TestKnnSelect:
    def test_exact_row(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
        labels = ["a", "b", "c"]
        assert knn_select(X, labels, np.array([1.0, 1.0])) == "b"

    def test_single_row(self):
        assert knn_select(np.array([[5.0]]), ["only"], np.array([-3.0])) == "only"

    def test_tie_breaks_by_problem_id(self):
        X = np.array([[1.0], [-1.0]])
        labels = ["far_id", "near_id"]
        got = knn_select(X, labels, np.array([0.0]), train_problem_ids=["p9", "p1"])
        assert got == "near_id"

    def test_dimension_mismatch(self):
        with pytest.raises(ParameterError):
            knn_select(np.zeros((2, 3)), ["a", "b"], np.zeros(2))


class TestWeightedF1:
    def test_perfect(self):
        assert weighted_f1(["a", "b", "a"], ["a", "b", "a"]) == 1.0

    def test_one_class_prediction_on_balanced_truth(self):
        # constant 'a' on balanced {a,b}: F1_a = 2/3, F1_b = 0 -> 1/3
        assert weighted_f1(["a"] * 4, ["a", "a", "b", "b"]) == pytest.approx(1.0 / 3.0)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(5)
        pred = list(rng.choice(["x", "y", "z"], 60))
        truth = list(rng.choice(["x", "y", "z"], 60))
        base = weighted_f1(pred, truth)
        idx = rng.permutation(60)
        assert weighted_f1([pred[i] for i in idx], [truth[i] for i in idx]) == base

    def test_relabeling_invariant(self):
        pred = ["a", "b", "a", "c"]
        truth = ["a", "a", "b", "c"]
        mapping = {"a": "z", "b": "q", "c": "m"}
        assert weighted_f1(pred, truth) == weighted_f1(
            [mapping[p] for p in pred], [mapping[t] for t in truth]
        )

    def test_errors(self):
        with pytest.raises(ParameterError):
            weighted_f1(["a"], [])
        with pytest.raises(ParameterError):
            weighted_f1([], [])


class TestAUCLoss:
    TABLE = [
        ("p0", "good", 0.8), ("p0", "bad", 0.3),
        ("p1", "good", 0.6), ("p1", "bad", 0.7),
    ]

    def test_oracle_selector_zero_loss(self):
        best = best_algorithm(self.TABLE)
        np.testing.assert_array_equal(auc_loss(best, self.TABLE), [0.0, 0.0])

    def test_constant_worst_selector(self):
        losses = auc_loss({"p0": "bad", "p1": "good"}, self.TABLE)
        np.testing.assert_allclose(losses, [0.5, 0.1])

    def test_nonnegative(self):
        rng = np.random.default_rng(6)
        table = [(f"p{i}", a, float(rng.random())) for i in range(20) for a in "ab"]
        selected = {f"p{i}": rng.choice(["a", "b"]) for i in range(20)}
        assert np.all(auc_loss(selected, table) >= 0.0)

    def test_missing_cell(self):
        with pytest.raises(ParameterError):
            auc_loss({"p9": "good"}, self.TABLE)


class TestKFoldSelector:
    def test_smoke_and_shapes(self):
        rng = np.random.default_rng(7)
        n = 30
        pids = [f"p{i:02d}" for i in range(n)]
        # two clusters with distinct best algorithms: 1-NN should beat chance
        X = np.vstack([rng.normal(0, 0.1, (15, 3)), rng.normal(5, 0.1, (15, 3))])
        table = []
        for i, pid in enumerate(pids):
            good = "alg_a" if i < 15 else "alg_b"
            other = "alg_b" if i < 15 else "alg_a"
            table.append((pid, good, 0.9))
            table.append((pid, other, 0.2))
        report, losses = kfold_selector_scores({"toy": X}, pids, table, folds=5)
        (name, f1, mean_loss), = report
        assert name == "toy"
        assert f1 > 0.9
        assert mean_loss < 0.05
        assert set(losses["toy"]) == set(pids)

"""Acceptance suite: one test per release criterion.

Each test prints an ``ACCEPTANCE n: PASS`` line with its runtime (visible
with ``pytest -s``).  Criteria 8 and 9 share one heavy benchmark fixture;
expect roughly half an hour of wall time for the full module on two cores.
"""

import os
import time

import numpy as np
import pytest
from scipy.stats import spearmanr

from bbobmix.calibration import estimate_all, table_defaults
from bbobmix.features import FEATURE_NAMES, FeatureConfig, compute_features, feature_table
from bbobmix.generator import (
    GeneratorConfig,
    evaluate as ma_evaluate,
    make_problem,
    one_hot,
    problem_from_spec,
    random_problem,
    sample_weights,
)
from bbobmix.io_utils import write_csv
from bbobmix.metrics import (
    auc,
    auc_table,
    kfold_selector_scores,
    rank_algorithms,
    targets,
)
from bbobmix.optimizers import RunLog
from bbobmix.pipeline import generate_specs, problem_id, pure_bbob_specs, run_portfolio
from bbobmix.sampling import sobol
from bbobmix.suite import evaluate as bbob_evaluate, make_instance

JOBS = min(2, os.cpu_count() or 1)


class _Timer:
    def __init__(self, limit_seconds):
        self.limit = limit_seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def _report(criterion, timer, detail=""):
    print(
        f"ACCEPTANCE {criterion}: PASS ({timer.elapsed:.1f}s / "
        f"limit {timer.limit:.0f}s) {detail}",
        flush=True,
    )
    assert timer.elapsed < timer.limit, f"criterion {criterion} exceeded its runtime limit"


# ---------------------------------------------------------------------------
# 1. Optimum identity of generated problems
# ---------------------------------------------------------------------------

def test_criterion_1_optimum_identity():
    with _Timer(60) as t:
        rng = np.random.default_rng(810)
        worst = 0.0
        for dim in (2, 5):
            cfg = GeneratorConfig(dim=dim)
            for _ in range(100):
                problem = random_problem(rng, cfg)
                rel = abs(ma_evaluate(problem, problem.x_opt) - 1e-8) / 1e-8
                worst = max(worst, rel)
                assert rel <= 1e-12
    _report(1, t, f"worst relative error {worst:.2e}")


# ---------------------------------------------------------------------------
# 2. Benchmark-suite soundness
# ---------------------------------------------------------------------------

def test_criterion_2_suite_soundness():
    with _Timer(300) as t:
        rng = np.random.default_rng(811)
        for fid in range(1, 25):
            for iid in range(1, 6):
                for dim in (2, 5):
                    inst = make_instance(fid, iid, dim)
                    gap = abs(bbob_evaluate(inst, inst.x_opt) - inst.f_opt)
                    assert gap <= 1e-9, (fid, iid, dim, gap)
                    X = rng.uniform(-5.0, 5.0, (10000, dim))
                    low = np.min(bbob_evaluate(inst, X) - inst.f_opt)
                    assert low >= -1e-9, (fid, iid, dim, low)
    _report(2, t, "24 functions x 5 instances x dims {2,5}")


# ---------------------------------------------------------------------------
# 3. Weight-sampler statistic
# ---------------------------------------------------------------------------

def test_criterion_3_weight_sampler_statistic():
    with _Timer(10) as t:
        rng = np.random.default_rng(812)
        counts = [int(np.sum(sample_weights(rng, 0.85) > 0)) for _ in range(10000)]
        mean = float(np.mean(counts))
        # independent oracle: count = max(2, Binomial(24, 0.15)), so the mean
        # is 3.6 plus the floor correction 2*P(X=0) + P(X=1)
        analytic = 3.6 + 2 * 0.85 ** 24 + 24 * 0.15 * 0.85 ** 23
        assert 3.5 <= mean <= 3.9
        assert mean == pytest.approx(analytic, abs=0.06)
    _report(3, t, f"mean active components {mean:.3f} (oracle {analytic:.3f})")


# ---------------------------------------------------------------------------
# 4. Scale-factor calibration
# ---------------------------------------------------------------------------

def test_criterion_4_scale_factor_calibration():
    with _Timer(600) as t:
        table = table_defaults().values
        assert table[0] == 11.0
        assert table[11] == 20.4
        assert table[22] == 9.0
        rows = estimate_all([5], 50000, "midrange", np.random.default_rng(813))
        estimated = np.array([factor for _, _, factor in rows])
        rho = spearmanr(estimated, table).statistic
        assert rho >= 0.8
    _report(4, t, f"Spearman vs defaults {rho:.3f}")


# ---------------------------------------------------------------------------
# 5. AUC oracle equivalence
# ---------------------------------------------------------------------------

def _brute_force_auc(logs, target_set):
    hits = 0
    budget = logs[0].budget
    for log in logs:
        best = np.full(budget + 1, np.inf)
        for ev, prec in log.events:
            best[ev:] = np.minimum(best[ev:], prec)
        for tau in target_set:
            hits += int(np.sum(best[1:] <= tau))
    return hits / (len(logs) * len(target_set) * budget)


def test_criterion_5_auc_oracle_equivalence():
    with _Timer(10) as t:
        rng = np.random.default_rng(814)
        tgt = targets()
        for _ in range(100):
            budget = int(rng.integers(5, 300))
            n_events = int(rng.integers(1, 12))
            evals = np.sort(
                rng.choice(np.arange(1, budget + 1), size=n_events, replace=False)
            )
            evals[0] = 1
            precs = np.sort(10.0 ** rng.uniform(-9, 3, n_events))[::-1]
            log = RunLog("p", "a", 0, budget,
                         tuple(zip(evals.tolist(), precs.tolist())), budget)
            assert auc([log], tgt) == _brute_force_auc([log], tgt)
        hand = RunLog("p", "a", 0, 10, ((1, 5e3), (6, 80.0)), 10)
        assert auc([hand], tgt) == pytest.approx(5.0 / 510.0, rel=1e-15)
    _report(5, t, "closed form == indicator enumeration on 100 logs")


# ---------------------------------------------------------------------------
# 6. Sobol' net property
# ---------------------------------------------------------------------------

def test_criterion_6_sobol_net_property():
    with _Timer(5) as t:
        for scramble in (False, True):
            pts = sobol(2, 256, seed=815, scramble=scramble).points
            for a in range(9):
                b = 8 - a
                counts = np.zeros((2 ** a, 2 ** b), dtype=int)
                np.add.at(
                    counts,
                    (
                        np.floor(pts[:, 0] * 2 ** a).astype(int),
                        np.floor(pts[:, 1] * 2 ** b).astype(int),
                    ),
                    1,
                )
                assert counts.min() == counts.max() == 1, (scramble, a, b)
    _report(6, t, "every elementary interval holds exactly one point")


# ---------------------------------------------------------------------------
# 7. Feature invariance suite
# ---------------------------------------------------------------------------

class _Stub:
    def __init__(self, dim, fn):
        self.dim, self.fn = dim, fn

    def evaluate(self, X):
        return self.fn(np.asarray(X, dtype=float))


def test_criterion_7_feature_invariance():
    with _Timer(60) as t:
        design = sobol(2, 2000, seed=816, scramble=True)
        base_fn = lambda X: np.sin(3 * X[:, 0]) + X[:, 1] ** 2 + 0.3 * X[:, 0]
        base = compute_features(_Stub(2, base_fn), design)

        doubled = compute_features(_Stub(2, lambda X: 8.0 * base_fn(X)), design)
        for name in FEATURE_NAMES:
            assert base[name] == doubled[name], name

        affine = compute_features(
            _Stub(2, lambda X: 2.31 * base_fn(X) - 47.0), design
        )
        for name in FEATURE_NAMES:
            assert base[name] == pytest.approx(affine[name], rel=1e-9, abs=1e-12), name

        linear = compute_features(_Stub(2, lambda X: X.sum(axis=-1)), design)
        assert linear["ela_meta.lin_r2"] >= 0.999

        sphere = make_problem(one_hot(1), np.ones(24, dtype=int), np.zeros(2), 2)
        f = compute_features(sphere, design)
        assert f["ela_meta.quad_r2"] >= f["ela_meta.lin_r2"]
    _report(7, t, "affine invariance plus diagnostic fits")


# ---------------------------------------------------------------------------
# 8 & 9. Desk-scale rank experiment and selector baseline
# ---------------------------------------------------------------------------

N_AFFINE = 100
BUDGET = 10000
RUNS = 5


@pytest.fixture(scope="session")
def rank_experiment(tmp_path_factory):
    out = tmp_path_factory.mktemp("rank_experiment")
    affine_specs = generate_specs(N_AFFINE, 5, 0.85, seed=8101)
    bbob_specs = pure_bbob_specs(5)
    started = time.perf_counter()
    logs_affine = run_portfolio(affine_specs, BUDGET, RUNS, master_seed=8102, jobs=JOBS)
    logs_bbob = run_portfolio(bbob_specs, BUDGET, RUNS, master_seed=8103, jobs=JOBS)
    elapsed = time.perf_counter() - started
    return {
        "out": out,
        "affine_specs": affine_specs,
        "table_affine": auc_table(logs_affine),
        "table_bbob": auc_table(logs_bbob),
        "bench_seconds": elapsed,
    }


def _rank_distribution_rows(ranks):
    algs = sorted(next(iter(ranks.values())))
    rows = []
    for alg in algs:
        values = [ranks[pid][alg] for pid in ranks]
        for r in (1.0, 2.0, 3.0, 4.0, 5.0):
            rows.append((alg, r, sum(1 for v in values if v == r) / len(values)))
    return rows


def test_criterion_8_rank_experiment(rank_experiment):
    with _Timer(7200) as t:
        ranks_affine = rank_algorithms(rank_experiment["table_affine"])
        ranks_bbob = rank_algorithms(rank_experiment["table_bbob"])
        out = rank_experiment["out"]
        write_csv(out / "auc_affine.csv", ("problem_id", "algorithm", "auc"),
                  rank_experiment["table_affine"])
        write_csv(out / "auc_bbob.csv", ("problem_id", "algorithm", "auc"),
                  rank_experiment["table_bbob"])
        for name, ranks in (("affine", ranks_affine), ("bbob", ranks_bbob)):
            write_csv(
                out / f"rank_distribution_{name}.csv",
                ("algorithm", "rank", "fraction"),
                _rank_distribution_rows(ranks),
            )

        rs_last = np.mean(
            [ranks_affine[pid]["random-search"] == 5.0 for pid in ranks_affine]
        )
        assert rs_last >= 0.5

        # one-hot sphere problems occupy the first five rows of the pure set
        f1_pids = {problem_id(i) for i in range(5)}
        by_alg = {"one-plus-one-es": [], "random-search": []}
        for pid, alg, value in rank_experiment["table_bbob"]:
            if pid in f1_pids and alg in by_alg:
                by_alg[alg].append(value)
        assert np.mean(by_alg["one-plus-one-es"]) > np.mean(by_alg["random-search"])
    t.elapsed += rank_experiment["bench_seconds"]
    _report(
        8, t,
        f"random-search strictly last on {rs_last:.0%} of affine problems; "
        f"CSVs in {rank_experiment['out']}",
    )


def test_criterion_9_selector_baseline(rank_experiment):
    with _Timer(300) as t:
        specs = rank_experiment["affine_specs"]
        pids = [problem_id(i) for i in range(len(specs))]
        problems = [problem_from_spec(s) for s in specs]
        table = feature_table(problems, FeatureConfig(seed=8104), problem_ids=pids)
        weights = np.array([s["weights"] for s in specs], dtype=float)

        report, losses = kfold_selector_scores(
            {"weights": weights, "ela": table.values},
            pids,
            rank_experiment["table_affine"],
            folds=10,
        )
        scores = {name: f1 for name, f1, _ in report}

        # expected weighted F1 of uniform random guessing over the 5 labels:
        # per class c with support share s_c, F1_c = 2*s_c*0.2/(s_c + 0.2)
        from bbobmix.metrics import best_algorithm

        labels = list(best_algorithm(rank_experiment["table_affine"]).values())
        shares = np.array([labels.count(c) for c in set(labels)]) / len(labels)
        baseline = float(np.sum(shares * (2 * shares * 0.2 / (shares + 0.2))))

        assert scores["weights"] > baseline
        assert scores["ela"] > baseline

        out = rank_experiment["out"]
        write_csv(out / "selector_report.csv",
                  ("representation", "weighted_f1", "mean_loss"), report)
        write_csv(
            out / "selector_losses.csv",
            ("representation", "problem_id", "loss"),
            [(name, pid, loss) for name in sorted(losses)
             for pid, loss in sorted(losses[name].items())],
        )
    _report(
        9, t,
        f"weighted F1: weights {scores['weights']:.3f}, ela {scores['ela']:.3f} "
        f"(random baseline {baseline:.3f})",
    )

"""A small optimizer portfolio with exact budget accounting and run logs.

Five deliberately simple, self-contained algorithms covering the usual
families: pure random search, a (1+1)-ES with 1/5th success rule, restarted
Nelder-Mead, DE/rand/1/bin, and a diagonal Gaussian ES with mean/step/
per-coordinate variance adaptation.  Every algorithm proposes points inside
[-5, 5]^dim (proposals are clamped) and never evaluates past its budget.

A run records improvement events as (evaluation index, best precision), where
precision is the objective value minus 1e-8 (the known optimum value of
generated problems), floored at 1e-16.  Once the floor is reached the run
stops: nothing can improve further.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, ParameterError

LOWER, UPPER = -5.0, 5.0
PRECISION_FLOOR = 1e-16
OPTIMUM_VALUE = 1e-8

ALGORITHM_IDS = (
    "random-search",
    "one-plus-one-es",
    "nelder-mead-restart",
    "de-rand-1-bin",
    "diag-gaussian-adapt",
)


@dataclass(frozen=True)
class AlgorithmSpec:
    """Portfolio member: an id plus its (documented) hyperparameters."""

    id: str
    params: dict = field(default_factory=dict)


def portfolio() -> list[AlgorithmSpec]:
    """The five built-in algorithms with their default settings."""
    return [
        AlgorithmSpec("random-search", {"chunk": 256}),
        AlgorithmSpec("one-plus-one-es", {"sigma0": 2.0}),
        AlgorithmSpec("nelder-mead-restart", {"step": 1.0, "collapse": 1e-12}),
        AlgorithmSpec("de-rand-1-bin", {"pop_per_dim": 10, "f": 0.5, "cr": 0.9}),
        AlgorithmSpec("diag-gaussian-adapt", {"sigma0": 2.0}),
    ]


@dataclass(frozen=True)
class RunLog:
    """Improvement trajectory of one run."""

    problem_id: str
    algorithm_id: str
    run_index: int
    budget: int
    events: tuple[tuple[int, float], ...]  # (eval index 1..budget, best precision)
    evals_used: int

    @property
    def final_precision(self) -> float:
        return self.events[-1][1]


class _BudgetedObjective:
    """Wraps a problem: counts evaluations, logs improvements, stops at the floor."""

    def __init__(self, problem, budget: int):
        self.problem = problem
        self.budget = budget
        self.evals = 0
        self.best = math.inf
        self.events: list[tuple[int, float]] = []
        self.floor_hit = False

    @property
    def remaining(self) -> int:
        return 0 if self.floor_hit else self.budget - self.evals

    @property
    def exhausted(self) -> bool:
        return self.remaining <= 0

    def __call__(self, X):
        """Evaluate up to the remaining budget; batches are truncated cleanly.

        Returns the values of the points actually evaluated (may be fewer
        than requested on the final batch).
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        k = min(len(X), self.remaining)
        if k == 0:
            return np.empty(0)
        X = X[:k]
        vals = np.atleast_1d(self.problem.evaluate(X))
        if not np.all(np.isfinite(vals)):
            raise EvaluationError("objective returned a non-finite value")
        for j, v in enumerate(vals):
            self.evals += 1
            prec = max(v - OPTIMUM_VALUE, PRECISION_FLOOR)
            if prec < self.best:
                self.best = prec
                self.events.append((self.evals, prec))
                if prec <= PRECISION_FLOOR:
                    self.floor_hit = True
                    return vals[: j + 1]
        return vals


def _clip(x):
    return np.clip(x, LOWER, UPPER)


def run(alg: AlgorithmSpec, problem, budget: int, seed, problem_id: str = "",
        run_index: int = 0) -> RunLog:
    """Execute one run of ``alg`` on ``problem`` for exactly ``budget``
    evaluations (fewer only if the precision floor is reached)."""
    if budget < 1:
        raise ParameterError(f"budget: must be >= 1, got {budget!r}")
    if alg.id not in _DRIVERS:
        raise ParameterError(f"algorithm: unknown id {alg.id!r}")
    rng = np.random.default_rng(seed)
    obj = _BudgetedObjective(problem, budget)
    _DRIVERS[alg.id](obj, problem.dim, rng, alg.params)
    return RunLog(
        problem_id=problem_id,
        algorithm_id=alg.id,
        run_index=run_index,
        budget=budget,
        events=tuple(obj.events),
        evals_used=obj.evals,
    )


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def _random_search(obj, dim, rng, params):
    chunk = params.get("chunk", 256)
    while not obj.exhausted:
        k = min(chunk, obj.remaining)
        obj(rng.uniform(LOWER, UPPER, (k, dim)))


def _one_plus_one_es(obj, dim, rng, params):
    """(1+1)-ES with the 1/5th success rule.

    Step size grows by exp(1/sqrt(dim+1)) on success and shrinks by the
    fourth root of that on failure, stationary at a 1/5 success rate.
    """
    sigma = params.get("sigma0", 2.0)
    up = math.exp(1.0 / math.sqrt(dim + 1))
    down = math.exp(-0.25 / math.sqrt(dim + 1))
    x = rng.uniform(LOWER, UPPER, dim)
    vals = obj(x)
    if len(vals) == 0:
        return
    fx = vals[0]
    while not obj.exhausted:
        y = _clip(x + sigma * rng.standard_normal(dim))
        vals = obj(y)
        if len(vals) == 0:
            break
        fy = vals[0]
        if fy < fx:
            x, fx = y, fy
            sigma *= up
        else:
            sigma *= down
        sigma = min(max(sigma, 1e-12), 10.0)


def _nelder_mead_restart(obj, dim, rng, params):
    """Nelder-Mead simplex with random restarts on collapse.

    Standard coefficients (reflect 1, expand 2, contract 0.5, shrink 0.5);
    a restart replaces the whole simplex when its diameter drops below the
    collapse threshold.
    """
    step = params.get("step", 1.0)
    collapse = params.get("collapse", 1e-12)

    while not obj.exhausted:
        x0 = rng.uniform(LOWER, UPPER, dim)
        simplex = [x0]
        for i in range(dim):
            p = x0.copy()
            p[i] = _clip(p[i] + step)
            simplex.append(p)
        simplex = np.array(simplex)
        fvals = []
        for p in simplex:
            v = obj(p)
            if len(v) == 0:
                return
            fvals.append(v[0])
        fvals = np.array(fvals)

        while not obj.exhausted:
            order = np.argsort(fvals, kind="stable")
            simplex, fvals = simplex[order], fvals[order]
            if np.max(np.abs(simplex - simplex[0])) < collapse:
                break  # collapsed: restart with a fresh simplex

            centroid = simplex[:-1].mean(axis=0)
            xr = _clip(centroid + (centroid - simplex[-1]))
            v = obj(xr)
            if len(v) == 0:
                return
            fr = v[0]
            if fr < fvals[0]:
                xe = _clip(centroid + 2.0 * (centroid - simplex[-1]))
                v = obj(xe)
                if len(v) == 0:
                    return
                fe = v[0]
                if fe < fr:
                    simplex[-1], fvals[-1] = xe, fe
                else:
                    simplex[-1], fvals[-1] = xr, fr
            elif fr < fvals[-2]:
                simplex[-1], fvals[-1] = xr, fr
            else:
                if fr < fvals[-1]:
                    xc = _clip(centroid + 0.5 * (xr - centroid))
                else:
                    xc = _clip(centroid + 0.5 * (simplex[-1] - centroid))
                v = obj(xc)
                if len(v) == 0:
                    return
                fc = v[0]
                if fc < min(fr, fvals[-1]):
                    simplex[-1], fvals[-1] = xc, fc
                else:
                    # shrink toward the best vertex
                    for i in range(1, len(simplex)):
                        simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                        v = obj(simplex[i])
                        if len(v) == 0:
                            return
                        fvals[i] = v[0]


def _de_rand_1_bin(obj, dim, rng, params):
    """DE/rand/1/bin with population 10*dim, F=0.5, CR=0.9."""
    npop = params.get("pop_per_dim", 10) * dim
    f = params.get("f", 0.5)
    cr = params.get("cr", 0.9)

    pop = rng.uniform(LOWER, UPPER, (npop, dim))
    fvals = np.full(npop, np.inf)
    vals = obj(pop)
    fvals[: len(vals)] = vals
    while not obj.exhausted:
        trials = np.empty_like(pop)
        for i in range(npop):
            r1, r2, r3 = _distinct_indices(rng, npop, i)
            mutant = pop[r1] + f * (pop[r2] - pop[r3])
            mask = rng.random(dim) < cr
            mask[rng.integers(dim)] = True
            trials[i] = _clip(np.where(mask, mutant, pop[i]))
        vals = obj(trials)
        k = len(vals)
        better = vals <= fvals[:k]
        pop[:k][better] = trials[:k][better]
        fvals[:k][better] = vals[better]


def _distinct_indices(rng, npop, i):
    idx = rng.choice(npop - 1, size=3, replace=False)
    idx[idx >= i] += 1  # skip i while staying uniform over the rest
    return idx


def _diag_gaussian_adapt(obj, dim, rng, params):
    """Diagonal Gaussian ES: weighted recombination of the better half,
    cumulative step-size control, and per-coordinate variance adaptation.

    Population 4 + floor(3*ln dim); log-linear recombination weights.
    """
    lam = 4 + int(3 * math.log(dim))
    mu = lam // 2
    w = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    w /= w.sum()
    mu_eff = 1.0 / np.sum(w ** 2)
    c_sigma = (mu_eff + 2.0) / (dim + mu_eff + 5.0)
    d_sigma = 1.0 + c_sigma
    c_var = 0.2
    chi = math.sqrt(dim) * (1.0 - 1.0 / (4.0 * dim) + 1.0 / (21.0 * dim ** 2))

    mean = rng.uniform(LOWER, UPPER, dim)
    sigma = params.get("sigma0", 2.0)
    var = np.ones(dim)
    path = np.zeros(dim)

    while not obj.exhausted:
        Z = rng.standard_normal((lam, dim))
        X = _clip(mean + sigma * np.sqrt(var) * Z)
        vals = obj(X)
        k = len(vals)
        if k == 0:
            break
        order = np.argsort(vals, kind="stable")[: min(mu, k)]
        wsel = w[: len(order)] / w[: len(order)].sum()
        new_mean = wsel @ X[order]
        z_eff = (new_mean - mean) / (sigma * np.sqrt(var))
        path = (1.0 - c_sigma) * path + math.sqrt(
            c_sigma * (2.0 - c_sigma) * mu_eff
        ) * z_eff
        sigma *= math.exp((c_sigma / d_sigma) * (np.linalg.norm(path) / chi - 1.0))
        sigma = min(max(sigma, 1e-12), 10.0)
        var = (1.0 - c_var) * var + c_var * (wsel @ Z[order] ** 2)
        var = np.clip(var, 1e-12, 1e4)
        mean = new_mean


_DRIVERS = {
    "random-search": _random_search,
    "one-plus-one-es": _one_plus_one_es,
    "nelder-mead-restart": _nelder_mead_restart,
    "de-rand-1-bin": _de_rand_1_bin,
    "diag-gaussian-adapt": _diag_gaussian_adapt,
}

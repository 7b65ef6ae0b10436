"""Sample-based landscape features (a compact 11-feature set).

Features are computed from one evaluated sample design after min-max
normalization of the objective values, so they are invariant under positive
affine rescaling of the objective.  The set spans the classical groups:
meta-model fits, value distribution, nearest-better clustering, dispersion,
and information content.

Anything structurally undefined (constant objective, degenerate neighbor
statistics) is reported as NaN; table assembly drops columns containing NaN,
so downstream consumers only see well-defined columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import kurtosis as _kurtosis
from scipy.stats import skew as _skew

from .errors import ParameterError
from .sampling import SampleDesign, scale_to_box, sobol

FEATURE_NAMES = (
    "ela_meta.lin_r2",
    "ela_meta.lin_intercept_abs",
    "ela_meta.quad_r2",
    "ela_meta.quad_cond",
    "ela_distr.skewness",
    "ela_distr.kurtosis",
    "nbc.nb_mean_ratio",
    "nbc.nb_cor",
    "disp.ratio_mean_05",
    "ic.h_max",
    "ic.eps_s",
)

# Epsilon grid for the information-content sweep: 10**linspace(-5, 15, 1000).
_IC_EPS_EXPONENTS = np.linspace(-5.0, 15.0, 1000)
_IC_SETTLING = 0.05
_DISP_QUANTILE = 0.05


@dataclass(frozen=True)
class FeatureConfig:
    """Repetition and sizing of the feature-extraction protocol."""

    n_designs: int = 5
    points_per_design: int | None = None  # None: 1000 * dim
    seed: int = 0

    def __post_init__(self):
        if self.n_designs < 1:
            raise ParameterError(f"n_designs: must be >= 1, got {self.n_designs!r}")

    def n_points(self, dim: int) -> int:
        return self.points_per_design if self.points_per_design else 1000 * dim


def minmax_normalize(y):
    """Map values onto [0, 1]; constant input yields zeros plus a flag."""
    y = np.asarray(y, dtype=float)
    if y.size < 2:
        raise ParameterError(f"y: need at least 2 values, got {y.size}")
    lo, hi = np.min(y), np.max(y)
    if hi == lo:
        return np.zeros_like(y), True
    return (y - lo) / (hi - lo), False


def _r2(y, design_matrix):
    beta, *_ = np.linalg.lstsq(design_matrix, y, rcond=None)
    resid = y - design_matrix @ beta
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot
    return float(min(max(r2, 0.0), 1.0)), beta


def _meta_model(X, y):
    n, d = X.shape
    lin = np.column_stack([np.ones(n), X])
    lin_r2, lin_beta = _r2(y, lin)
    quad = np.column_stack([lin, X ** 2])
    quad_r2, quad_beta = _r2(y, quad)
    sq = np.abs(quad_beta[1 + d:])
    quad_cond = float(np.max(sq) / max(np.min(sq), 1e-300))
    return {
        "ela_meta.lin_r2": lin_r2,
        "ela_meta.lin_intercept_abs": float(abs(lin_beta[0])),
        "ela_meta.quad_r2": quad_r2,
        "ela_meta.quad_cond": quad_cond,
    }


def _distribution(y):
    return {
        "ela_distr.skewness": float(_skew(y, bias=True)),
        "ela_distr.kurtosis": float(_kurtosis(y, fisher=False, bias=True)),
    }


def _sq_dists(A, B):
    """Squared Euclidean distances between rows of A and rows of B."""
    sq = np.sum(A ** 2, axis=1)[:, None] + np.sum(B ** 2, axis=1)[None, :]
    return np.maximum(sq - 2.0 * (A @ B.T), 0.0)


def _nearest_better(X, y):
    """Nearest-neighbor vs nearest-strictly-better distance statistics.

    Points without a strictly better point (the minima) are excluded; both
    statistics are set-based, so sample order does not matter.
    """
    n = len(X)
    d_nn = cKDTree(X).query(X, k=2)[0][:, 1]
    d_nb_sq = np.full(n, np.nan)
    order = np.argsort(y, kind="stable")
    Xs, ys = X[order], y[order]
    block = 512
    for a in range(0, n, block):
        b = min(a + block, n)
        # candidate better points all precede the block in the y-ordering
        dist = _sq_dists(Xs[a:b], Xs[:b])
        better = ys[None, :b] < ys[a:b, None]
        d_nb_sq[order[a:b]] = np.min(np.where(better, dist, np.inf), axis=1)
    has_better = np.isfinite(d_nb_sq)
    if np.sum(has_better) < 2:
        return {"nbc.nb_mean_ratio": np.nan, "nbc.nb_cor": np.nan}
    nn, nb = d_nn[has_better], np.sqrt(d_nb_sq[has_better])
    if np.std(nn) == 0.0 or np.std(nb) == 0.0:
        cor = np.nan
    else:
        cor = float(np.corrcoef(nn, nb)[0, 1])
    return {
        "nbc.nb_mean_ratio": float(np.mean(nb) / np.mean(nn)),
        "nbc.nb_cor": cor,
    }


def _mean_pairwise(X):
    n = len(X)
    total = 0.0
    block = 1024
    for a in range(0, n, block):
        total += np.sum(np.sqrt(_sq_dists(X[a:min(a + block, n)], X)))
    return total / (n * (n - 1))  # diagonal contributes zero


# The all-points mean distance depends only on the design, not the objective;
# cache it per design identity.
_MEAN_DIST_CACHE: dict[tuple, float] = {}


def _mean_pairwise_cached(X, key):
    if key not in _MEAN_DIST_CACHE:
        if len(_MEAN_DIST_CACHE) > 64:
            _MEAN_DIST_CACHE.clear()
        _MEAN_DIST_CACHE[key] = _mean_pairwise(X)
    return _MEAN_DIST_CACHE[key]


def _dispersion(X, y, design_key=None):
    q = np.quantile(y, _DISP_QUANTILE)
    best = y <= q  # threshold-based subset keeps the statistic order-free
    if np.sum(best) < 2:
        return {"disp.ratio_mean_05": np.nan}
    if design_key is None:
        all_mean = _mean_pairwise(X)
    else:
        all_mean = _mean_pairwise_cached(X, design_key)
    return {"disp.ratio_mean_05": float(_mean_pairwise(X[best]) / all_mean)}


def _canonical_tour(X):
    """Nearest-neighbor tour starting from the lexicographically smallest point.

    Ties (equal distances) resolve to the lexicographically smaller point, so
    the tour is a pure function of the point set.
    """
    n = len(X)
    lex = np.lexsort(X.T[::-1])  # sort by column 0, then 1, ...
    start = lex[0]
    lex_rank = np.empty(n, dtype=int)
    lex_rank[lex] = np.arange(n)

    tour = np.empty(n, dtype=int)
    tour[0] = start
    remaining = np.delete(np.arange(n), start)
    Xr = np.ascontiguousarray(X[remaining])
    sq = np.sum(Xr ** 2, axis=1)
    current = X[start]
    for k in range(1, n):
        # squared distance via cached norms; the constant |current|^2 term
        # does not affect the argmin
        d = sq - 2.0 * (Xr @ current)
        j = int(np.argmin(d))
        ties = np.flatnonzero(d == d[j])
        if len(ties) > 1:
            j = int(ties[np.argmin(lex_rank[remaining[ties]])])
        tour[k] = remaining[j]
        current = X[remaining[j]]
        last = len(remaining) - 1
        remaining[j] = remaining[last]
        Xr[j] = Xr[last]
        sq[j] = sq[last]
        remaining, Xr, sq = remaining[:last], Xr[:last], sq[:last]
    return tour


def _information_content(X, y):
    tour = _canonical_tour(X)
    xs, ys = X[tour], y[tour]
    steps = np.sqrt(np.sum(np.diff(xs, axis=0) ** 2, axis=1))
    phi = np.diff(ys) / np.maximum(steps, 1e-300)

    eps = 10.0 ** _IC_EPS_EXPONENTS
    n_eps = len(eps)
    # symbol in {-1, 0, 1} per (step, epsilon), encoded as 0..2
    s = (np.sign(phi)[:, None] * (np.abs(phi)[:, None] > eps[None, :])).astype(np.int8) + 1
    codes = 3 * s[:-1].astype(np.int32) + s[1:]  # 0..8 per consecutive pair
    n_pairs = codes.shape[0]
    flat = codes + 9 * np.arange(n_eps, dtype=np.int32)[None, :]
    counts = np.bincount(flat.ravel(), minlength=9 * n_eps).reshape(n_eps, 9)
    p = counts / n_pairs
    p = p[:, [1, 2, 3, 5, 6, 7]]  # transitions between differing symbols only
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * (np.log(p) / np.log(6.0)), 0.0)
    h = -np.sum(terms, axis=1)
    settled = np.flatnonzero(h < _IC_SETTLING)
    eps_s = _IC_EPS_EXPONENTS[settled[0]] if len(settled) else _IC_EPS_EXPONENTS[-1]
    return {"ic.h_max": float(np.max(h)), "ic.eps_s": float(eps_s)}


def compute_features(problem, design: SampleDesign) -> dict[str, float]:
    """All features of one problem on one design.

    ``problem`` needs a ``dim`` attribute and an ``evaluate(points)`` method;
    mixture problems and plain diagnostic stubs both qualify.
    """
    if design.dim != problem.dim:
        raise ParameterError(
            f"design: dim {design.dim} does not match problem dim {problem.dim}"
        )
    X = scale_to_box(design, -5.0, 5.0)
    y = np.asarray(problem.evaluate(X), dtype=float)
    norm, constant = minmax_normalize(y)
    if constant:
        return {name: np.nan for name in FEATURE_NAMES}

    out: dict[str, float] = {}
    out.update(_meta_model(X, norm))
    out.update(_distribution(norm))
    out.update(_nearest_better(X, norm))
    out.update(_dispersion(X, norm, (design.kind, design.dim, design.n, design.seed)))
    out.update(_information_content(X, norm))
    return out


@dataclass(frozen=True)
class FeatureTable:
    """Per-problem mean feature values with undefined columns dropped."""

    problem_ids: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray
    dropped: tuple[str, ...]

    def row(self, problem_id: str) -> dict[str, float]:
        i = self.problem_ids.index(problem_id)
        return dict(zip(self.columns, self.values[i]))


def feature_table(problems, cfg: FeatureConfig, problem_ids=None) -> FeatureTable:
    """Mean features over ``cfg.n_designs`` scrambled Sobol' designs.

    Designs are shared across problems of the same dimension (seeded from
    cfg.seed and the design index), mirroring a fixed measurement protocol.
    Columns undefined for any problem are dropped from the table.
    """
    problems = list(problems)
    if problem_ids is None:
        problem_ids = [str(i) for i in range(len(problems))]
    designs_by_dim: dict[int, list[SampleDesign]] = {}
    rows = []
    for problem in problems:
        dim = problem.dim
        if dim not in designs_by_dim:
            designs_by_dim[dim] = [
                sobol(dim, cfg.n_points(dim), seed=int(
                    np.random.SeedSequence([cfg.seed, k]).generate_state(1)[0]
                ), scramble=True)
                for k in range(cfg.n_designs)
            ]
        per_design = [compute_features(problem, d) for d in designs_by_dim[dim]]
        rows.append({
            name: float(np.mean([f[name] for f in per_design]))
            for name in FEATURE_NAMES
        })

    keep = [
        name for name in FEATURE_NAMES
        if all(np.isfinite(r[name]) for r in rows)
    ]
    dropped = tuple(name for name in FEATURE_NAMES if name not in keep)
    values = np.array([[r[name] for name in keep] for r in rows])
    return FeatureTable(tuple(problem_ids), tuple(keep), values, dropped)

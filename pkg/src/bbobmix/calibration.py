"""Per-function scale factors: hard-coded defaults plus a sampling estimator.

The defaults normalize each component's clamped log-precision into roughly
[0, 1] before mixing.  The estimator reproduces the procedure behind them:
draw uniform samples on one instance, take log10 of the clamped precision,
aggregate, and shift by +8 so a factor S maps (log-precision + 8)/S to ~[0,1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

AGGREGATIONS = ("min", "mean", "max", "midrange")

# Default scale factors for function ids 1..24.
_TABLE = (
    11.0, 17.5, 12.3, 12.6, 11.5, 15.3, 12.1, 15.3, 15.2, 17.4, 13.4, 20.4,
    12.9, 10.4, 12.3, 10.3, 9.8, 10.6, 10.0, 14.7, 10.7, 10.8, 9.0, 12.1,
)

LOG_PRECISION_FLOOR = -8.0


@dataclass(frozen=True)
class ScaleFactors:
    """24 positive factors plus where they came from."""

    values: np.ndarray
    provenance: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (24,) or np.any(v <= 0.0):
            raise ParameterError("values: expected 24 positive scale factors")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def table_defaults() -> ScaleFactors:
    """The hard-coded default factors."""
    return ScaleFactors(np.array(_TABLE), "hardcoded")


def _aggregate(values: np.ndarray, agg: str) -> float:
    if agg == "min":
        return float(np.min(values))
    if agg == "mean":
        return float(np.mean(values))
    if agg == "max":
        return float(np.max(values))
    if agg == "midrange":
        return float((np.max(values) + np.min(values)) / 2.0)
    raise ParameterError(f"agg: unknown aggregation {agg!r}; use one of {AGGREGATIONS}")


def estimate_from_values(values, f_opt: float, agg: str) -> float:
    """Scale factor from raw objective samples of a single function.

    Precision below 1e-8 is clamped, so an everywhere-optimal input yields 0.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 1:
        raise ParameterError("values: need at least one sample")
    logs = np.log10(np.maximum(values - f_opt, 10.0 ** LOG_PRECISION_FLOOR))
    return _aggregate(logs, agg) + 8.0


def estimate_scale_factor(
    fid: int, dim: int, n: int, agg: str, rng: np.random.Generator
) -> float:
    """Estimate the factor for one function by uniform random sampling.

    Only one instance (iid=1) is sampled; instance-to-instance variation of
    log-precision ranges is small.
    """
    from .suite import make_instance  # local import to avoid cycle at import time

    if n < 1:
        raise ParameterError(f"n: must be >= 1, got {n!r}")
    inst = make_instance(fid, 1, dim)
    X = rng.uniform(-5.0, 5.0, (int(n), inst.dim))
    return estimate_from_values(inst.evaluate(X), inst.f_opt, agg)


def estimate_all(dims, n: int, agg: str, rng: np.random.Generator):
    """Estimate factors for every fid and each requested dimension.

    Returns a list of (fid, dim, factor) rows sorted by (fid, dim).  Each
    (fid, dim) cell gets an independent child seed drawn up front, so the
    cells can be computed in any order (or in parallel) with identical
    results.
    """
    dims = [int(d) for d in dims]
    tasks = [(fid, dim) for fid in range(1, 25) for dim in dims]
    seeds = rng.integers(0, 2 ** 63 - 1, size=len(tasks))
    rows = []
    for (fid, dim), seed in zip(tasks, seeds):
        sub = np.random.default_rng(int(seed))
        rows.append((fid, dim, estimate_scale_factor(fid, dim, n, agg, sub)))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def harden(rows) -> ScaleFactors:
    """Turn an estimate_all table into defaults: per-fid median over dims,
    rounded to one decimal."""
    by_fid: dict[int, list[float]] = {}
    for fid, _dim, factor in rows:
        by_fid.setdefault(int(fid), []).append(float(factor))
    if sorted(by_fid) != list(range(1, 25)):
        raise ParameterError("rows: need estimates for every fid in 1..24")
    values = np.array([np.round(np.median(by_fid[fid]), 1) for fid in range(1, 25)])
    return ScaleFactors(values, "estimated(median over dims, 1-decimal)")

"""Affine mixtures of the 24 BBOB functions in log-precision space.

A mixture problem combines one instance of each component function.  At a
point x, each active component i (weight w_i > 0) is evaluated relative to its
own optimum, the precision is clamped at 1e-8, log10-transformed, shifted by
+8 and divided by the component's scale factor; the weighted sum L is mapped
back through 10**(10*L - 8).  The global optimum is relocated to a caller
chosen point where every component attains its clamp, so the problem's
minimum value is exactly 1e-8.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calibration import table_defaults
from .errors import EvaluationError, ParameterError
from .suite import BBOBInstance, make_instance

N_COMPONENTS = 24
VALUE_FLOOR = 1e-8


# ---------------------------------------------------------------------------
# Weight vectors (plain arrays of length 24 on the probability simplex)
# ---------------------------------------------------------------------------

def validate_weights(w) -> np.ndarray:
    """Check simplex invariants and return the weights as a float array."""
    w = np.asarray(w, dtype=float)
    if w.shape != (N_COMPONENTS,):
        raise ParameterError(f"weights: expected shape (24,), got {w.shape}")
    if np.any(w < 0.0):
        raise ParameterError("weights: entries must be nonnegative")
    if abs(w.sum() - 1.0) > 1e-12:
        raise ParameterError(f"weights: must sum to 1 within 1e-12, got {w.sum()!r}")
    positive = int(np.sum(w > 0.0))
    if positive < 2 and not np.any(w == 1.0):
        raise ParameterError(
            "weights: need >= 2 positive entries or a single entry equal to 1"
        )
    return w


def one_hot(fid: int) -> np.ndarray:
    """Weight vector selecting a single component function."""
    if not 1 <= int(fid) <= 24:
        raise ParameterError(f"fid: must be in 1..24, got {fid!r}")
    w = np.zeros(N_COMPONENTS)
    w[int(fid) - 1] = 1.0
    return w


def sample_weights(rng: np.random.Generator, threshold: float = 0.85) -> np.ndarray:
    """Draw a sparse weight vector.

    Uniform raws are cut at min(threshold, third-highest raw) so at least two
    components survive, negatives are zeroed, and the rest is renormalized to
    sum 1.  With the default threshold 0.85 the expected number of surviving
    components is about 3.7.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ParameterError(f"threshold: must be in [0, 1], got {threshold!r}")
    while True:
        u = rng.uniform(0.0, 1.0, N_COMPONENTS)
        third = np.sort(u)[-3]
        t = min(threshold, third)
        w = np.maximum(0.0, u - t)
        total = w.sum()
        if total > 0.0 and np.sum(w > 0.0) >= 2:
            return w / total
        # all survivors zero or a tie left one survivor: resample


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for random problem generation."""

    dim: int = 5
    threshold: float = 0.85
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ParameterError(f"threshold: must be in [0, 1], got {self.threshold!r}")
        if self.dim < 2:
            raise ParameterError(f"dim: must be >= 2, got {self.dim!r}")
        if self.count < 1:
            raise ParameterError(f"count: must be >= 1, got {self.count!r}")


# ---------------------------------------------------------------------------
# Mixture problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MAProblem:
    """A fully specified mixture problem. Immutable; evaluation is pure."""

    dim: int
    weights: np.ndarray
    iids: np.ndarray
    x_opt: np.ndarray  # relocated global optimum
    scale: np.ndarray
    components: tuple[BBOBInstance, ...]

    def evaluate(self, x):
        return evaluate(self, x)

    def __call__(self, x):
        return evaluate(self, x)

    @property
    def active(self) -> np.ndarray:
        """Indices (0-based) of components with positive weight."""
        return np.flatnonzero(self.weights > 0.0)


def make_problem(weights, iids, x_opt_new, dim: int, scale=None) -> MAProblem:
    """Assemble a mixture problem from explicit parts.

    ``scale`` defaults to the hard-coded per-function scale factors.
    """
    weights = validate_weights(weights)
    iids = np.asarray(iids, dtype=int)
    if iids.shape != (N_COMPONENTS,):
        raise ParameterError(f"iids: expected shape (24,), got {iids.shape}")
    if np.any(iids < 1) or np.any(iids > 100):
        raise ParameterError("iids: entries must lie in 1..100")
    x_opt_new = np.asarray(x_opt_new, dtype=float)
    if x_opt_new.shape != (dim,):
        raise ParameterError(
            f"x_opt_new: expected shape ({dim},), got {x_opt_new.shape}"
        )
    if np.any(np.abs(x_opt_new) > 5.0):
        raise ParameterError("x_opt_new: coordinates must lie in [-5, 5]")
    if scale is None:
        scale = table_defaults().values
    scale = np.asarray(scale, dtype=float)
    if scale.shape != (N_COMPONENTS,) or np.any(scale <= 0.0):
        raise ParameterError("scale: expected 24 positive factors")

    components = tuple(
        make_instance(fid, int(iids[fid - 1]), dim) for fid in range(1, 25)
    )
    x_opt_new = x_opt_new.copy()
    x_opt_new.setflags(write=False)
    return MAProblem(dim, weights, iids, x_opt_new, scale, components)


def evaluate(problem: MAProblem, x):
    """Mixture value(s) at ``x``; accepts shape (dim,) or (n, dim).

    Returns values in [1e-8, inf); exactly 1e-8 at the relocated optimum.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[-1] != problem.dim:
        raise ParameterError(
            f"x: expected last axis of length dim={problem.dim}, got shape {x.shape}"
        )
    single = x.ndim == 1
    X = x[None, :] if single else x

    L = np.zeros(X.shape[0])
    for i in problem.active:
        comp = problem.components[i]
        shifted = (X - problem.x_opt) + comp.x_opt
        vals = comp.evaluate(shifted) - comp.f_opt
        if not np.all(np.isfinite(vals)):
            raise EvaluationError(
                f"component {i + 1} ({comp.name}) produced a non-finite value"
            )
        p = np.maximum(vals, VALUE_FLOOR)
        L += problem.weights[i] * ((np.log10(p) + 8.0) / problem.scale[i])
    out = 10.0 ** (10.0 * L - 8.0)
    return float(out[0]) if single else out


def log_combined(problem: MAProblem, x):
    """The inner weighted log-precision sum L (linear in the weights)."""
    x = np.asarray(x, dtype=float)
    v = evaluate(problem, x)
    return (np.log10(v) + 8.0) / 10.0


def random_problem(rng: np.random.Generator, cfg: GeneratorConfig) -> MAProblem:
    """Sample weights, component instances and optimum location uniformly."""
    weights = sample_weights(rng, cfg.threshold)
    iids = rng.integers(1, 101, N_COMPONENTS)
    x_opt_new = rng.uniform(-5.0, 5.0, cfg.dim)
    return make_problem(weights, iids, x_opt_new, cfg.dim)


# ---------------------------------------------------------------------------
# Problem specs: JSON-friendly dicts that round-trip losslessly
# ---------------------------------------------------------------------------

SPEC_KEYS = ("dim", "weights", "iids", "x_opt", "scale_factors", "seed")


def problem_to_spec(problem: MAProblem, seed: int = 0) -> dict:
    """Plain-dict form of a problem (the instance-spec file schema)."""
    return {
        "dim": problem.dim,
        "weights": [float(v) for v in problem.weights],
        "iids": [int(v) for v in problem.iids],
        "x_opt": [float(v) for v in problem.x_opt],
        "scale_factors": [float(v) for v in problem.scale],
        "seed": int(seed),
    }


def problem_from_spec(spec: dict) -> MAProblem:
    """Rebuild a problem from its spec dict."""
    missing = [k for k in SPEC_KEYS if k not in spec]
    if missing:
        raise ParameterError(f"spec: missing fields {missing}")
    return make_problem(
        spec["weights"],
        spec["iids"],
        spec["x_opt"],
        int(spec["dim"]),
        spec["scale_factors"],
    )


def spec_to_dim(spec: dict, dim: int) -> dict:
    """Project a spec onto a lower dimension.

    Weights, component instances and scale factors are kept; the optimum
    location is truncated to the first ``dim`` coordinates, so the same
    abstract problem can be studied in several dimensions.
    """
    if dim > int(spec["dim"]):
        raise ParameterError(
            f"dim: cannot raise dimension from {spec['dim']} to {dim}"
        )
    out = dict(spec)
    out["dim"] = dim
    out["x_opt"] = list(spec["x_opt"])[:dim]
    return out

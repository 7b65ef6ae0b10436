"""The 24 noiseless BBOB benchmark functions with seeded instance transformations.

Each function id (fid 1..24) comes in instances (iid >= 1): a shifted optimum
location, a random optimum value, and function-specific rotations / auxiliary
constants.  Instances here are generated from an internal seeding scheme (seed
derived from (fid, iid)); they satisfy the structural properties of the
original suite (distinct optima, rotations, boundary penalties) but are not
bit-compatible with the COCO instances.

Vector convention: ``evaluate`` accepts a single point of shape (dim,) or a
batch of shape (n, dim).  Rotation matrices act on column vectors; batches are
rows, so R is applied as ``X @ R.T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ParameterError

FIDS = tuple(range(1, 25))

FUNCTION_NAMES = {
    1: "sphere",
    2: "ellipsoid-separable",
    3: "rastrigin-separable",
    4: "bueche-rastrigin",
    5: "linear-slope",
    6: "attractive-sector",
    7: "step-ellipsoid",
    8: "rosenbrock",
    9: "rosenbrock-rotated",
    10: "ellipsoid-rotated",
    11: "discus",
    12: "bent-cigar",
    13: "sharp-ridge",
    14: "different-powers",
    15: "rastrigin-rotated",
    16: "weierstrass",
    17: "schaffers-f7",
    18: "schaffers-f7-ill",
    19: "griewank-rosenbrock",
    20: "schwefel",
    21: "gallagher-101",
    22: "gallagher-21",
    23: "katsuura",
    24: "lunacek-bi-rastrigin",
}


# ---------------------------------------------------------------------------
# Shared helper transformations
# ---------------------------------------------------------------------------

def transform_osz(x):
    """Oscillation transformation; odd, fixes 0, strictly increasing."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    nz = x != 0.0
    ax = np.log(np.abs(x[nz]))
    pos = x[nz] > 0.0
    c1 = np.where(pos, 10.0, 5.5)
    c2 = np.where(pos, 7.9, 3.1)
    out[nz] = np.sign(x[nz]) * np.exp(ax + 0.049 * (np.sin(c1 * ax) + np.sin(c2 * ax)))
    return out


def transform_asy(x, beta: float):
    """Asymmetry transformation along the last axis; nonpositive entries pass through."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    idx = np.arange(d) / max(d - 1, 1)
    expo = 1.0 + beta * idx * np.sqrt(np.maximum(x, 0.0))
    return np.where(x > 0.0, np.maximum(x, 0.0) ** expo, x)


def _lambda_diag(alpha: float, dim: int) -> np.ndarray:
    """Diagonal of the conditioning matrix: alpha**(0.5*i/(dim-1)), i = 0..dim-1."""
    return alpha ** (0.5 * np.arange(dim) / max(dim - 1, 1))


def lambda_alpha(alpha: float, dim: int) -> np.ndarray:
    """Conditioning matrix with diagonal spanning [1, sqrt(alpha)] geometrically."""
    return np.diag(_lambda_diag(alpha, dim))


def f_pen(x):
    """Quadratic boundary penalty; zero inside [-5, 5]^dim."""
    x = np.asarray(x, dtype=float)
    return np.sum(np.maximum(0.0, np.abs(x) - 5.0) ** 2, axis=-1)


def _orthonormal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Orthonormalized standard-normal matrix (Gram-Schmidt, two passes)."""
    b = rng.standard_normal((dim, dim))
    for _ in range(2):  # re-orthogonalization pass tightens to ~1e-15
        for i in range(dim):
            for j in range(i):
                b[i] -= (b[i] @ b[j]) * b[j]
            b[i] /= np.sqrt(b[i] @ b[i])
    return b


# ---------------------------------------------------------------------------
# Instance container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BBOBInstance:
    """One (fid, iid, dim) benchmark instance. Immutable; evaluation is pure."""

    fid: int
    iid: int
    dim: int
    x_opt: np.ndarray
    f_opt: float
    rotation_R: np.ndarray
    rotation_Q: np.ndarray
    aux: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return FUNCTION_NAMES[self.fid]

    def evaluate(self, x):
        return evaluate(self, x)

    def __call__(self, x):
        return evaluate(self, x)


def optimum(inst: BBOBInstance):
    """Location and value of the instance's global optimum."""
    return inst.x_opt, inst.f_opt


def evaluate(inst: BBOBInstance, x):
    """Objective value(s) at ``x``; accepts shape (dim,) or (n, dim)."""
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[-1] != inst.dim:
        raise ParameterError(
            f"x: expected last axis of length dim={inst.dim}, got shape {x.shape}"
        )
    single = x.ndim == 1
    X = x[None, :] if single else x
    base = _RAW[inst.fid](inst, X)
    out = base + inst.f_opt
    return float(out[0]) if single else out


def make_instance(fid: int, iid: int, dim: int) -> BBOBInstance:
    """Construct a deterministic instance of function ``fid``.

    All randomness derives from a generator seeded with (fid, iid); the draw
    order is fixed (f_opt, rotations, optimum location, auxiliary constants),
    so construction is bitwise reproducible.  Instances are immutable, which
    lets repeated requests share one cached object.
    """
    if not (isinstance(fid, (int, np.integer)) and 1 <= fid <= 24):
        raise ParameterError(f"fid: must be an integer in 1..24, got {fid!r}")
    if not (isinstance(iid, (int, np.integer)) and iid >= 1):
        raise ParameterError(f"iid: must be a positive integer, got {iid!r}")
    if not (isinstance(dim, (int, np.integer)) and dim >= 2):
        raise ParameterError(f"dim: must be an integer >= 2, got {dim!r}")
    return _make_instance_cached(int(fid), int(iid), int(dim))


@lru_cache(maxsize=8192)
def _make_instance_cached(fid: int, iid: int, dim: int) -> BBOBInstance:
    rng = np.random.default_rng(np.random.SeedSequence([fid, iid]))

    # Optimum value: Cauchy-derived (normal ratio), two decimals, clamped.
    g1, g2 = rng.standard_normal(2)
    while g2 == 0.0:
        g1, g2 = rng.standard_normal(2)
    f_opt = float(min(1000.0, max(-1000.0, np.round(1e4 * g1 / g2) / 100.0)))

    R = _orthonormal(rng, dim) if fid in _NEEDS_R else np.eye(dim)
    Q = _orthonormal(rng, dim) if fid in _NEEDS_Q else np.eye(dim)

    x_opt, aux = _SETUP[fid](rng, dim, R, Q)
    x_opt = np.asarray(x_opt, dtype=float)
    x_opt.setflags(write=False)
    R.setflags(write=False)
    Q.setflags(write=False)
    return BBOBInstance(fid, iid, dim, x_opt, f_opt, R, Q, aux)


_NEEDS_R = {6, 7, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 21, 22, 23, 24}
_NEEDS_Q = {6, 7, 13, 15, 16, 17, 18, 23, 24}


def _uniform_xopt(rng, dim, lo=-4.0, hi=4.0):
    return rng.uniform(lo, hi, dim)


# ---------------------------------------------------------------------------
# Per-function setup: draws x_opt and precomputes evaluation constants
# ---------------------------------------------------------------------------

def _setup_plain(rng, dim, R, Q):
    return _uniform_xopt(rng, dim), {}


def _setup_f2(rng, dim, R, Q):
    return _uniform_xopt(rng, dim), {"pw": 10.0 ** (6.0 * np.arange(dim) / (dim - 1))}


def _setup_f3(rng, dim, R, Q):
    return _uniform_xopt(rng, dim), {"lam": _lambda_diag(10.0, dim)}


def _setup_f4(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    x_opt[0::2] = np.abs(x_opt[0::2])  # skewed coordinates get positive optimum
    return x_opt, {"s": _lambda_diag(10.0, dim)}


def _setup_f5(rng, dim, R, Q):
    draw = _uniform_xopt(rng, dim)
    x_opt = 5.0 * np.where(draw >= 0.0, 1.0, -1.0)
    slope = np.sign(x_opt) * _lambda_diag(100.0, dim)
    return x_opt, {"slope": slope}


def _setup_f6(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {"M": Q @ np.diag(_lambda_diag(10.0, dim)) @ R}


def _setup_f7(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {
        "M1": np.diag(_lambda_diag(10.0, dim)) @ R,
        "pw": 10.0 ** (2.0 * np.arange(dim) / (dim - 1)),
    }


def _setup_f8(rng, dim, R, Q):
    x_opt = rng.uniform(-3.0, 3.0, dim)
    return x_opt, {"scale": max(1.0, np.sqrt(dim) / 8.0)}


def _setup_f9(rng, dim, R, Q):
    scale = max(1.0, np.sqrt(dim) / 8.0)
    x_opt = R.T @ np.full(dim, 0.5) / scale  # the point where z = 1
    return x_opt, {"M": scale * R}


def _setup_f10(rng, dim, R, Q):
    return _uniform_xopt(rng, dim), {"pw": 10.0 ** (6.0 * np.arange(dim) / (dim - 1))}


def _setup_f13(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {"M": Q @ np.diag(_lambda_diag(10.0, dim)) @ R}


def _setup_f14(rng, dim, R, Q):
    return _uniform_xopt(rng, dim), {"exps": 2.0 + 4.0 * np.arange(dim) / (dim - 1)}


def _setup_f15(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {"B": R @ np.diag(_lambda_diag(10.0, dim)) @ Q}


def _setup_f16(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    k = np.arange(12)
    ak, bk = 0.5 ** k, 3.0 ** k
    f0 = float(np.sum(ak * np.cos(2.0 * np.pi * bk * 0.5)))
    return x_opt, {
        "B": R @ np.diag(_lambda_diag(0.01, dim)) @ Q,
        "ak": ak,
        "bk": bk,
        "f0": f0,
    }


def _setup_f17(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {"B": np.diag(_lambda_diag(10.0, dim)) @ Q}


def _setup_f18(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {"B": np.diag(_lambda_diag(1000.0, dim)) @ Q}


def _setup_f19(rng, dim, R, Q):
    scale = max(1.0, np.sqrt(dim) / 8.0)
    x_opt = R.T @ np.full(dim, 0.5) / scale
    return x_opt, {"M": scale * R}


def _setup_f20(rng, dim, R, Q):
    draw = _uniform_xopt(rng, dim)
    signs = np.where(draw >= 0.0, 1.0, -1.0)
    x_opt = 0.5 * 4.2096874633 * signs
    return x_opt, {"signs": signs, "lam": _lambda_diag(10.0, dim)}


def _setup_gallagher(npeaks, alpha1, box, box1):
    def setup(rng, dim, R, Q):
        alpha_set = 1000.0 ** (2.0 * np.arange(npeaks - 1) / (npeaks - 2))
        alphas = np.concatenate(([alpha1], rng.permutation(alpha_set)))
        C = np.empty((npeaks, dim))
        for i, a in enumerate(alphas):
            diag = _lambda_diag(a, dim) / a ** 0.25
            C[i] = diag[rng.permutation(dim)]
        y_opt = rng.uniform(-box1, box1, dim)
        rest = rng.uniform(-box, box, (npeaks - 1, dim))
        Y = np.vstack([y_opt, rest])
        w = np.concatenate(([10.0], 1.1 + 8.0 * np.arange(npeaks - 1) / (npeaks - 2)))
        RY = Y @ R.T
        return y_opt, {
            "w": w,
            "C": C,
            "RY": RY,
            "CRY": C * RY,
            "const": np.sum(C * RY ** 2, axis=1),
        }

    return setup


def _setup_f23(rng, dim, R, Q):
    x_opt = _uniform_xopt(rng, dim)
    return x_opt, {"M": Q @ np.diag(_lambda_diag(100.0, dim)) @ R}


def _setup_f24(rng, dim, R, Q):
    mu0 = 2.5
    draw = _uniform_xopt(rng, dim)
    signs = np.where(draw >= 0.0, 1.0, -1.0)
    x_opt = 0.5 * mu0 * signs
    s = 1.0 - 1.0 / (2.0 * np.sqrt(dim + 20.0) - 8.2)
    mu1 = -np.sqrt((mu0 ** 2 - 1.0) / s)
    return x_opt, {
        "signs": signs,
        "M": Q @ np.diag(_lambda_diag(100.0, dim)) @ R,
        "s": s,
        "mu0": mu0,
        "mu1": mu1,
    }


_SETUP = {
    1: _setup_plain,
    2: _setup_f2,
    3: _setup_f3,
    4: _setup_f4,
    5: _setup_f5,
    6: _setup_f6,
    7: _setup_f7,
    8: _setup_f8,
    9: _setup_f9,
    10: _setup_f10,
    11: _setup_plain,
    12: _setup_plain,
    13: _setup_f13,
    14: _setup_f14,
    15: _setup_f15,
    16: _setup_f16,
    17: _setup_f17,
    18: _setup_f18,
    19: _setup_f19,
    20: _setup_f20,
    21: _setup_gallagher(101, 1000.0, 5.0, 4.0),
    22: _setup_gallagher(21, 1000.0 ** 2, 4.9, 3.92),
    23: _setup_f23,
    24: _setup_f24,
}


# ---------------------------------------------------------------------------
# Raw function values (optimum value 0, boundary penalty included)
# ---------------------------------------------------------------------------

def _f1(inst, X):
    z = X - inst.x_opt
    return np.sum(z ** 2, axis=-1)


def _f2(inst, X):
    z = transform_osz(X - inst.x_opt)
    return z ** 2 @ inst.aux["pw"]


def _f3(inst, X):
    z = transform_asy(transform_osz(X - inst.x_opt), 0.2) * inst.aux["lam"]
    return 10.0 * (inst.dim - np.sum(np.cos(2 * np.pi * z), axis=-1)) + np.sum(z ** 2, axis=-1)


def _f4(inst, X):
    z = transform_osz(X - inst.x_opt)
    s = np.broadcast_to(inst.aux["s"], z.shape).copy()
    skew = np.zeros_like(z, dtype=bool)
    skew[:, 0::2] = z[:, 0::2] > 0.0
    s[skew] *= 10.0
    z = s * z
    rast = 10.0 * (inst.dim - np.sum(np.cos(2 * np.pi * z), axis=-1)) + np.sum(z ** 2, axis=-1)
    return rast + 100.0 * f_pen(X)


def _f5(inst, X):
    slope = inst.aux["slope"]
    z = np.where(X * inst.x_opt < 25.0, X, inst.x_opt)  # clamp past the optimal face
    return np.sum(5.0 * np.abs(slope) - slope * z, axis=-1)


def _f6(inst, X):
    z = (X - inst.x_opt) @ inst.aux["M"].T
    s = np.where(z * inst.x_opt > 0.0, 100.0, 1.0)
    return transform_osz(np.sum((s * z) ** 2, axis=-1)) ** 0.9


def _f7(inst, X):
    zhat = (X - inst.x_opt) @ inst.aux["M1"].T
    ztilde = np.where(
        np.abs(zhat) > 0.5,
        np.floor(0.5 + zhat),
        np.floor(0.5 + 10.0 * zhat) / 10.0,
    )
    z = ztilde @ inst.rotation_Q.T
    core = 0.1 * np.maximum(np.abs(zhat[:, 0]) * 1e-4, z ** 2 @ inst.aux["pw"])
    return core + f_pen(X)


def _rosenbrock_core(z):
    return np.sum(
        100.0 * (z[:, :-1] ** 2 - z[:, 1:]) ** 2 + (z[:, :-1] - 1.0) ** 2, axis=-1
    )


def _f8(inst, X):
    z = inst.aux["scale"] * (X - inst.x_opt) + 1.0
    return _rosenbrock_core(z)


def _f9(inst, X):
    z = X @ inst.aux["M"].T + 0.5
    return _rosenbrock_core(z)


def _f10(inst, X):
    z = transform_osz((X - inst.x_opt) @ inst.rotation_R.T)
    return z ** 2 @ inst.aux["pw"]


def _f11(inst, X):
    z = transform_osz((X - inst.x_opt) @ inst.rotation_R.T)
    return 1e6 * z[:, 0] ** 2 + np.sum(z[:, 1:] ** 2, axis=-1)


def _f12(inst, X):
    z = transform_asy((X - inst.x_opt) @ inst.rotation_R.T, 0.5) @ inst.rotation_R.T
    return z[:, 0] ** 2 + 1e6 * np.sum(z[:, 1:] ** 2, axis=-1)


def _f13(inst, X):
    z = (X - inst.x_opt) @ inst.aux["M"].T
    return z[:, 0] ** 2 + 100.0 * np.sqrt(np.sum(z[:, 1:] ** 2, axis=-1))


def _f14(inst, X):
    z = (X - inst.x_opt) @ inst.rotation_R.T
    return np.sqrt(np.sum(np.abs(z) ** inst.aux["exps"], axis=-1))


def _f15(inst, X):
    y = transform_asy(transform_osz((X - inst.x_opt) @ inst.rotation_R.T), 0.2)
    z = y @ inst.aux["B"].T
    return 10.0 * (inst.dim - np.sum(np.cos(2 * np.pi * z), axis=-1)) + np.sum(z ** 2, axis=-1)


def _f16(inst, X):
    y = transform_osz((X - inst.x_opt) @ inst.rotation_R.T)
    z = y @ inst.aux["B"].T
    ak, bk, f0 = inst.aux["ak"], inst.aux["bk"], inst.aux["f0"]
    inner = np.sum(ak * np.cos(2.0 * np.pi * bk * (z[..., None] + 0.5)), axis=-1)
    core = 10.0 * (np.sum(inner, axis=-1) / inst.dim - f0) ** 3
    return core + (10.0 / inst.dim) * f_pen(X)


def _schaffers(inst, X):
    y = transform_asy((X - inst.x_opt) @ inst.rotation_R.T, 0.5)
    z = y @ inst.aux["B"].T
    s = np.sqrt(z[:, :-1] ** 2 + z[:, 1:] ** 2)
    core = np.mean(np.sqrt(s) * (1.0 + np.sin(50.0 * s ** 0.2) ** 2), axis=-1) ** 2
    return core + 10.0 * f_pen(X)


def _f19(inst, X):
    z = X @ inst.aux["M"].T + 0.5
    s = 100.0 * (z[:, :-1] ** 2 - z[:, 1:]) ** 2 + (z[:, :-1] - 1.0) ** 2
    return 10.0 * np.mean(s / 4000.0 - np.cos(s), axis=-1) + 10.0


def _f20(inst, X):
    two_abs = 2.0 * np.abs(inst.x_opt)
    xhat = 2.0 * inst.aux["signs"] * X
    zhat = xhat.copy()
    zhat[:, 1:] += 0.25 * (xhat[:, :-1] - two_abs[:-1])
    z = 100.0 * (inst.aux["lam"] * (zhat - two_abs) + two_abs)
    core = -np.mean(z * np.sin(np.sqrt(np.abs(z))), axis=-1) / 100.0 + 4.189828872724339
    return core + 100.0 * f_pen(z / 100.0)


def _gallagher(inst, X):
    aux = inst.aux
    XR = X @ inst.rotation_R.T
    # (x-y)' R' C R (x-y) expanded into three matmuls to avoid a cubic tensor
    q = XR ** 2 @ aux["C"].T - 2.0 * (XR @ aux["CRY"].T) + aux["const"]
    vals = aux["w"] * np.exp(-q / (2.0 * inst.dim))
    core = transform_osz(10.0 - np.max(vals, axis=-1)) ** 2
    return core + f_pen(X)


def _f23(inst, X):
    d = inst.dim
    z = (X - inst.x_opt) @ inst.aux["M"].T
    j = 2.0 ** np.arange(1, 33)
    zj = z[..., None] * j
    s = np.sum(np.abs(zj - np.round(zj)) / j, axis=-1)
    prod = np.prod(1.0 + np.arange(1, d + 1) * s, axis=-1) ** (10.0 / d ** 1.2)
    return 10.0 / d ** 2 * prod - 10.0 / d ** 2 + f_pen(X)


def _f24(inst, X):
    aux = inst.aux
    d, mu0, mu1, s = inst.dim, aux["mu0"], aux["mu1"], aux["s"]
    xhat = 2.0 * aux["signs"] * X
    z = (xhat - mu0) @ aux["M"].T
    s1 = np.sum((xhat - mu0) ** 2, axis=-1)
    s2 = d + s * np.sum((xhat - mu1) ** 2, axis=-1)
    core = np.minimum(s1, s2) + 10.0 * (d - np.sum(np.cos(2 * np.pi * z), axis=-1))
    return core + 1e4 * f_pen(X)


_RAW = {
    1: _f1,
    2: _f2,
    3: _f3,
    4: _f4,
    5: _f5,
    6: _f6,
    7: _f7,
    8: _f8,
    9: _f9,
    10: _f10,
    11: _f11,
    12: _f12,
    13: _f13,
    14: _f14,
    15: _f15,
    16: _f16,
    17: _schaffers,
    18: _schaffers,
    19: _f19,
    20: _f20,
    21: _gallagher,
    22: _gallagher,
    23: _f23,
    24: _f24,
}

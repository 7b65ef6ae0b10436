"""Deterministic sample designs: Sobol' sequences and uniform clouds.

The Sobol' generator carries its own direction numbers (Joe-Kuo order-6
values) for up to 21 dimensions; that covers every use in this package.
Scrambling is a seeded per-dimension digital XOR shift, which preserves the
dyadic net structure.  The initial all-zeros point is retained.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, ParameterError

MAX_DIM = 21
_NBITS = 30

# Primitive polynomials and initial direction values (Joe-Kuo) for dims 2..21.
_POLY = (
    3, 7, 11, 13, 19, 25, 37, 41, 47, 55,
    59, 61, 67, 91, 97, 103, 109, 115, 131, 137,
)
_MINIT = (
    (1,),
    (1, 3),
    (1, 3, 1),
    (1, 1, 1),
    (1, 1, 3, 3),
    (1, 3, 5, 13),
    (1, 1, 5, 5, 17),
    (1, 1, 5, 5, 5),
    (1, 1, 7, 11, 19),
    (1, 1, 5, 1, 1),
    (1, 1, 1, 3, 11),
    (1, 3, 5, 5, 31),
    (1, 3, 3, 9, 7, 49),
    (1, 1, 1, 15, 21, 21),
    (1, 3, 1, 13, 27, 49),
    (1, 1, 1, 15, 7, 5),
    (1, 3, 1, 15, 13, 25),
    (1, 1, 5, 5, 19, 61),
    (1, 3, 7, 11, 23, 15, 103),
    (1, 3, 7, 13, 13, 15, 69),
)


@dataclass(frozen=True)
class SampleDesign:
    """n points in [0, 1)^dim, fully determined by (kind, dim, n, seed)."""

    kind: str
    dim: int
    n: int
    seed: int
    points: np.ndarray


def _direction_matrix(dim: int) -> np.ndarray:
    """Direction numbers as (dim, _NBITS) integers scaled by 2**_NBITS."""
    V = np.zeros((dim, _NBITS), dtype=np.uint64)
    V[0, :] = [1 << (_NBITS - k) for k in range(1, _NBITS + 1)]  # van der Corput
    for j in range(1, dim):
        poly = _POLY[j - 1]
        m = list(_MINIT[j - 1])
        s = poly.bit_length() - 1
        a = [(poly >> (s - i)) & 1 for i in range(1, s)]
        for k in range(s, _NBITS):
            new = m[k - s] ^ (m[k - s] << s)
            for i in range(1, s):
                if a[i - 1]:
                    new ^= m[k - i] << i
            m.append(new)
        V[j, :] = [m[k] << (_NBITS - 1 - k) for k in range(_NBITS)]
    return V


def sobol(dim: int, n: int, seed: int = 0, scramble: bool = True) -> SampleDesign:
    """First ``n`` Sobol' points in ``dim`` dimensions.

    With ``scramble`` a seeded digital XOR shift is applied per dimension;
    without it the pure sequence is returned (first point all zeros).
    """
    if dim < 1:
        raise ParameterError(f"dim: must be >= 1, got {dim!r}")
    if n < 1:
        raise ParameterError(f"n: must be >= 1, got {n!r}")
    if dim > MAX_DIM:
        raise CapabilityError(
            f"sobol: direction numbers cover dim <= {MAX_DIM}, got {dim}"
        )
    if n > (1 << _NBITS):
        raise CapabilityError(f"sobol: at most 2**{_NBITS} points, got {n}")

    V = _direction_matrix(dim)
    ints = np.zeros((n, dim), dtype=np.uint64)
    state = np.zeros(dim, dtype=np.uint64)
    for i in range(1, n):
        c = (i & -i).bit_length() - 1  # index of lowest set bit: Gray-code step
        state = state ^ V[:, c]
        ints[i] = state

    if scramble:
        rng = np.random.default_rng(np.random.SeedSequence([0x50B01, seed]))
        shift = rng.integers(0, 1 << _NBITS, size=dim, dtype=np.uint64)
        ints = ints ^ shift

    points = ints.astype(float) / float(1 << _NBITS)
    points.setflags(write=False)
    kind = "scrambled-sobol" if scramble else "sobol"
    return SampleDesign(kind, dim, n, seed, points)


def uniform_design(dim: int, n: int, seed: int = 0) -> SampleDesign:
    """n i.i.d. uniform points in [0, 1)^dim."""
    if dim < 1:
        raise ParameterError(f"dim: must be >= 1, got {dim!r}")
    if n < 1:
        raise ParameterError(f"n: must be >= 1, got {n!r}")
    rng = np.random.default_rng(np.random.SeedSequence([0x501F0, seed]))
    points = rng.random((n, dim))
    points.setflags(write=False)
    return SampleDesign("uniform", dim, n, seed, points)


def scale_to_box(design: SampleDesign, lo: float, hi: float) -> np.ndarray:
    """Affine map of the design's coordinates onto [lo, hi)."""
    if not lo < hi:
        raise ParameterError(f"lo/hi: need lo < hi, got lo={lo!r}, hi={hi!r}")
    return lo + (hi - lo) * design.points

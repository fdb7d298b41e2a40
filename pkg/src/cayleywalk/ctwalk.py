"""Continuous-time companion walk in the large-degree limit.

Amplitudes are ``(x + 1) i^x J_{x+1}(2t) / t``. Bessel functions of integer
order come from Miller's downward recurrence normalised with
``J_0 + 2 sum_k J_2k = 1``; a power series covers small arguments as an
independent check.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

from .core import Distribution

__all__ = [
    "BesselOverflowError",
    "bessel_j",
    "bessel_j_sequence",
    "bessel_j_series",
    "miller_start_order",
    "ct_amplitude",
    "ct_pmf",
]

_BIG = 1e250


class BesselOverflowError(ArithmeticError):
    pass


def miller_start_order(n: int, z: float) -> int:
    """Starting order of the downward recurrence for orders up to ``n``.

    The recurrence is only stable once it starts above both ``n`` and ``z``.
    """
    m = max(n, int(math.ceil(z)))
    start = m + 20 + int(math.ceil(2.0 * math.sqrt(m * max(z, 1.0))))
    return start + (start % 2)


def bessel_j_sequence(n_max: int, z: float) -> NDArray[np.float64]:
    """``J_0(z), ..., J_{n_max}(z)`` for ``z >= 0``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if z < 0:
        raise ValueError("z must be non-negative")
    out = np.zeros(n_max + 1)
    if z == 0.0:
        out[0] = 1.0
        return out
    start = miller_start_order(n_max, z)
    vals = np.zeros(start + 2)
    vals[start] = 1e-300
    two_over_z = 2.0 / z
    j_next, j_cur = 0.0, 1e-300
    for k in range(start, 0, -1):
        j_prev = k * two_over_z * j_cur - j_next
        vals[k - 1] = j_prev
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _BIG:
            vals[k - 1 :] /= _BIG
            j_next /= _BIG
            j_cur /= _BIG
    norm = vals[0] + 2.0 * vals[2::2].sum()
    if not np.isfinite(norm) or norm == 0.0:
        raise BesselOverflowError(f"normalisation failed for z={z}")
    out[:] = vals[: n_max + 1] / norm
    return out


def bessel_j(n: int, z: float) -> float:
    """Bessel function of the first kind ``J_n(z)``, integer ``n >= 0``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    return float(bessel_j_sequence(n, z)[n])


def bessel_j_series(n: int, z: float, terms: int = 60) -> float:
    """Power series ``sum_m (-1)^m (z/2)^(2m+n) / (m! (m+n)!)``; for small ``z``."""
    half = z / 2.0
    term = half**n / math.factorial(n)
    total = term
    for m in range(1, terms):
        term *= -half * half / (m * (m + n))
        total += term
    return total


def ct_amplitude(x: int, t: float) -> complex:
    if t <= 0:
        raise ValueError("t must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    return (x + 1) * (1j**x) * bessel_j(x + 1, 2.0 * t) / t


def ct_pmf(t: float, x_max: int | None = None) -> Distribution:
    """``P(X = x) = (x + 1)^2 J_{x+1}(2t)^2 / t^2`` for ``0 <= x <= x_max``."""
    if t <= 0:
        raise ValueError("t must be positive")
    min_cut = int(math.ceil(2 * t)) + 50
    if x_max is None:
        x_max = min_cut
    if x_max < min_cut:
        raise ValueError(f"x_max must be at least ceil(2t) + 50 = {min_cut}")
    j = bessel_j_sequence(x_max + 1, 2.0 * t)
    x = np.arange(x_max + 1)
    pmf = (x + 1) ** 2 * j[1:] ** 2 / (t * t)
    return Distribution(pmf, t, meta={"walk": "continuous"})

"""Closed-form limit objects of the half-line walk.

Localization profiles at long times, the limit law of ``X_t / t`` (an atom
at zero plus a weighted one-dimensional walk density), the group-velocity kinematics behind
that law, and the densities of the continuous-time companion walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .core import Case, Parity, WalkParams

__all__ = [
    "LimitMeasure",
    "a_kappa",
    "theorem1_pmf",
    "theorem1_profile",
    "c_kappa",
    "konno_density",
    "f_kappa",
    "f_kappa_cdf",
    "rho_kappa",
    "weight_function",
    "group_velocity",
    "inverse_velocity",
    "stationary_weights",
    "velocity_density",
    "normalised_stationary_weights",
    "arcsine_density",
    "rho_continuous",
    "rho_continuous_cdf",
    "integrate_over_support",
]


def a_kappa(kappa: int) -> float:
    return 2.0 * math.sqrt(kappa - 1) / kappa


# --- localization -------------------------------------------------------------


def theorem1_pmf(params: WalkParams, parity: Parity | str, x: int) -> float:
    """Limit of ``P(X_t = x)`` along even or odd times."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if params.case is Case.A:
        return 0.0
    k = params.kappa
    scale = ((k - 2) / (k - 1)) ** 2
    if Parity(parity) is Parity.EVEN:
        if x % 2:
            return 0.0
        if x == 0:
            return scale
        return scale * k * (1.0 / (k - 1)) ** x
    if x % 2 == 0:
        return 0.0
    return k * scale * (1.0 / (k - 1)) ** x


def theorem1_profile(params: WalkParams, parity: Parity | str, x_max: int) -> np.ndarray:
    return np.array([theorem1_pmf(params, parity, x) for x in range(x_max + 1)])


def c_kappa(params: WalkParams) -> float:
    """Total localized mass."""
    if params.case is Case.A:
        return 0.0
    return (params.kappa - 2) / (params.kappa - 1)


# --- densities ----------------------------------------------------------------


def _indicator_open(x, a):
    return np.abs(x) < abs(a)


def konno_density(x, a: float):
    """Limit density of the one-dimensional two-state walk on ``(-|a|, |a|)``; zero outside and at the endpoints."""
    if not abs(a) < 1:
        raise ValueError("the walk density needs |a| < 1")
    x = np.asarray(x, dtype=float)
    inside = _indicator_open(x, a)
    xs = np.where(inside, x, 0.0)
    val = math.sqrt(1.0 - a * a) / (math.pi * (1.0 - xs**2) * np.sqrt(a * a - xs**2))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def f_kappa(x, kappa: int):
    """Absolutely continuous limit density on ``[0, a_kappa)``."""
    if kappa < 3:
        raise ValueError("kappa must be >= 3")
    a = a_kappa(kappa)
    x = np.asarray(x, dtype=float)
    inside = (x >= 0) & (x < a)
    xs = np.where(inside, x, 0.0)
    val = (kappa - 2) * xs**2 / (math.pi * (1.0 - xs**2) * np.sqrt(a * a - xs**2))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def f_kappa_cdf(y, kappa: int):
    """``int_0^y f_kappa``, in closed form."""
    a = a_kappa(kappa)
    s = math.sqrt(1.0 - a * a)
    y = np.clip(np.asarray(y, dtype=float), 0.0, a)
    with np.errstate(divide="ignore"):
        at = np.arctan2(y * s, np.sqrt(a * a - y * y))
    out = kappa / math.pi * (at - s * np.arcsin(y / a))
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def weight_function(x, params: WalkParams):
    x = np.asarray(x, dtype=float)
    k = params.kappa
    coef = k if params.case is Case.A else k / (k - 1)
    return coef * x**2


@dataclass(frozen=True)
class LimitMeasure:
    """Atom at zero plus a density supported on ``[0, upper)``."""

    atom_at_zero: float
    density: Callable
    upper: float
    density_cdf: Callable | None = None

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        if self.density_cdf is not None:
            cont = self.density_cdf(y)
        else:
            cont = np.vectorize(lambda v: integrate_over_support(self.density, 0.0, min(max(v, 0.0), self.upper), self.upper))(y)
        out = np.where(y >= 0, self.atom_at_zero + cont, 0.0)
        return float(out) if out.ndim == 0 else out

    def total_mass(self) -> float:
        return self.atom_at_zero + integrate_over_support(self.density, 0.0, self.upper, self.upper)


def rho_kappa(params: WalkParams) -> LimitMeasure:
    """Limit law of ``X_t / t``."""
    k = params.kappa
    c = c_kappa(params)
    w = 1.0 - c
    return LimitMeasure(
        atom_at_zero=c,
        density=lambda x: w * f_kappa(x, k),
        upper=a_kappa(k),
        density_cdf=lambda y: w * f_kappa_cdf(y, k),
    )


def integrate_over_support(func: Callable, lo: float, hi: float, edge: float) -> float:
    """Integrate ``func`` over ``[lo, hi]`` when it has ``1/sqrt(edge^2 - x^2)`` endpoint blow-ups.

    Substitutes ``x = edge * sin(phi)`` so that ``dx`` cancels the singular
    factor. ``func`` is evaluated away from ``+-edge``.
    """
    if hi <= lo:
        return 0.0
    p_lo = math.asin(max(-1.0, lo / edge))
    p_hi = math.asin(min(1.0, hi / edge))

    def integrand(phi):
        c = math.cos(phi)
        if c == 0.0:
            return _edge_limit(func, edge, phi)
        return float(func(edge * math.sin(phi))) * edge * c

    val, _ = integrate.quad(integrand, p_lo, p_hi, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def _edge_limit(func, edge, phi):
    # the integrand is continuous in phi; approach the endpoint from inside
    h = 1e-7 * (1 if phi < 0 else -1)
    c = math.cos(phi + h)
    return float(func(edge * math.sin(phi + h))) * edge * c


# --- kinematics ---------------------------------------------------------------


def group_velocity(k, kappa: int):
    """Group velocity ``h(k) = a sin k / sqrt(1 - a^2 cos^2 k)``."""
    a = a_kappa(kappa)
    k = np.asarray(k, dtype=float)
    out = a * np.sin(k) / np.sqrt(1.0 - a * a * np.cos(k) ** 2)
    return float(out) if out.ndim == 0 else out


def inverse_velocity(x: float, branch: str, kappa: int) -> float:
    """Wave number ``k_+(x)`` or ``k_-(x)`` in ``[0, 2 pi)`` with velocity ``x``."""
    a = a_kappa(kappa)
    if abs(x) > a + 1e-15:
        raise ValueError(f"|x| must not exceed a_kappa = {a} (got {x})")
    x = max(-a, min(a, x))
    if branch not in ("plus", "minus"):
        raise ValueError("branch must be 'plus' or 'minus'")
    sign = 1.0 if branch == "plus" else -1.0
    cos_k = sign / a * math.sqrt((a * a - x * x) / (1.0 - x * x))
    sin_k = math.sqrt(1.0 - a * a) / a * x / math.sqrt(1.0 - x * x)
    k = math.atan2(sin_k, cos_k) % (2.0 * math.pi)
    # -tiny % 2pi rounds up to 2pi itself
    return 0.0 if k >= 2.0 * math.pi else k


def stationary_weights(x: float, kappa: int) -> tuple[float, float, float]:
    """``(h'(k_+(x)), p(k_+(x)), q(k_+(x)))`` at a velocity strictly inside the band."""
    a = a_kappa(kappa)
    if not 0.0 < abs(x) < a:
        raise ValueError(f"need 0 < |x| < a_kappa = {a} (got {x})")
    hprime = (1.0 - x * x) * math.sqrt(a * a - x * x) / math.sqrt(1.0 - a * a)
    sgn = math.copysign(1.0, x)
    pq = (1.0 + sgn) * (kappa - 2) ** 2 / (4.0 * kappa * (kappa - 1)) * x * x / (a * a - x * x)
    return hprime, pq, pq


def normalised_stationary_weights(x: float, params: WalkParams) -> tuple[float, float, float]:
    """Stationary-point weights ``p = q = (1 + sgn x) w(x) / 4`` with the displayed ``h'``.

    These are the weights for which the two-branch assembly integrates to
    the non-localized mass ``1 - C_kappa``.
    """
    hprime, _, _ = stationary_weights(x, params.kappa)
    pq = (1.0 + math.copysign(1.0, x)) * float(weight_function(x, params)) / 4.0
    return hprime, pq, pq


def velocity_density(x: float, kappa: int, weights=None) -> float:
    """Density of the velocity ``h(k)`` assembled from both stationary points.

    Each of the two branches ``k_+(x)``, ``k_-(x)`` contributes
    ``(p + q) / (2 pi |h'|)``. ``weights(x)`` defaults to the closed-form
    ``stationary_weights``.
    """
    if weights is None:
        hprime, p, q = stationary_weights(x, kappa)
    else:
        hprime, p, q = weights(x)
    return 2.0 * (p + q) / (2.0 * math.pi * abs(hprime))


# --- continuous-time companion ----------------------------------------------


def arcsine_density(x, a: float):
    if a <= 0:
        raise ValueError("a must be positive")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < a
    xs = np.where(inside, x, 0.0)
    out = np.where(inside, 1.0 / (math.pi * np.sqrt(a * a - xs**2)), 0.0)
    return float(out) if out.ndim == 0 else out


def rho_continuous(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, x**2 * arcsine_density(x, 2.0), 0.0)
    return float(out) if out.ndim == 0 else out


def rho_continuous_cdf(y):
    y = np.clip(np.asarray(y, dtype=float), 0.0, 2.0)
    phi = np.arcsin(y / 2.0)
    out = 2.0 / math.pi * (phi - np.sin(phi) * np.cos(phi))
    return float(out) if out.ndim == 0 else out

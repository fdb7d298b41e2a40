"""Generating functions of the half-line walk and coefficient extraction.

``psi_tilde(x, z)`` is the power series ``sum_t Psi_t(x) z^t`` in closed form.
Coefficients are recovered with the trapezoidal rule on a circle of radius
``r0 < 1``. Rounding errors are amplified by ``r0^-t``, so radii close to
the unit circle (default 0.9) are preferred. The square root shared by ``lambda`` and ``nu`` is continued
along the discretised circle from the positive real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .core import Case, Parity, WalkParams, constants

__all__ = [
    "BranchError",
    "PoleError",
    "QuadratureError",
    "ResolventParams",
    "ContourSpec",
    "contour_nodes",
    "discriminant_root",
    "lambda_z",
    "nu_z",
    "nu_at_one",
    "psi_tilde",
    "amplitude_via_contour",
    "contour_probabilities",
    "limit_amplitudes",
    "resolvent_for",
]

LAMBDA_AT_ZERO = 0.0
_JUMP_TOL = 0.5


class BranchError(ArithmeticError):
    """The square-root branch jumped between adjacent contour nodes."""


class PoleError(ArithmeticError):
    """Evaluation requested at z = +1 or -1."""


class QuadratureError(ArithmeticError):
    """Doubling the number of nodes changed the result noticeably."""


@dataclass(frozen=True)
class ResolventParams:
    kappa: int
    m: float
    a: float

    @classmethod
    def from_walk(cls, params: WalkParams) -> "ResolventParams":
        c = constants(params)
        return cls(params.kappa, c.m_kappa, c.a_kappa)


@dataclass(frozen=True)
class ContourSpec:
    radius: float = 0.9
    nodes: int = 1024

    def __post_init__(self):
        if not 0.0 < self.radius < 1.0:
            raise ValueError(f"radius must lie in (0, 1) (got {self.radius})")
        if self.nodes < 64:
            raise ValueError(f"need at least 64 nodes (got {self.nodes})")

    @classmethod
    def default_for(cls, x: int, t: int, radius: float = 0.9) -> "ContourSpec":
        return cls(radius, max(1024, 8 * (t + x + 16)))


def contour_nodes(c: ContourSpec) -> NDArray[np.complex128]:
    theta = 2.0 * np.pi * np.arange(c.nodes) / c.nodes
    return c.radius * np.exp(1j * theta)


def _radicand(z, a):
    z2 = z * z
    return z2 * z2 + 2.0 * (1.0 - 2.0 * a * a) * z2 + 1.0


def discriminant_root(z: NDArray[np.complex128], a: float) -> NDArray[np.complex128]:
    """sqrt(z^4 + 2(1 - 2a^2) z^2 + 1) continued along the ordered points ``z``.

    The first point fixes the branch with positive real part. Each next value
    takes the sign closer to its predecessor.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    s = np.sqrt(_radicand(z, a))
    if s[0].real < 0:
        s[0] = -s[0]
    for j in range(1, len(s)):
        if abs(s[j] - s[j - 1]) > abs(s[j] + s[j - 1]):
            s[j] = -s[j]
        if abs(s[j] - s[j - 1]) > _JUMP_TOL:
            raise BranchError(f"square-root branch jumped at node {j}")
    return s


def _root_single(z: complex, a: float) -> complex:
    # continue from the positive real axis along the arc of radius |z|
    r = abs(z)
    if r == 0:
        return 1.0 + 0j
    phi = math.atan2(z.imag, z.real)
    n = max(16, int(abs(phi) / (2 * math.pi) * 4096))
    path = r * np.exp(1j * np.linspace(0.0, phi, n + 1))
    return complex(discriminant_root(path, a)[-1])


def lambda_z(z, a: float, root=None):
    """``(z^2 + 1 - sqrt(.)) / (2 a z)``; vanishes like ``a z`` at the origin."""
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(zz == 0):
        raise ZeroDivisionError("lambda(z) is evaluated at z = 0; use LAMBDA_AT_ZERO")
    if root is None:
        root = _roots_for(zz, a)
    out = (zz * zz + 1.0 - root) / (2.0 * a * zz)
    return complex(out[0]) if scalar else out


def nu_z(z, p: ResolventParams, root=None):
    if p.m == 1.0:
        raise ZeroDivisionError("nu(z) is undefined for m = 1")
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if root is None:
        root = _roots_for(zz, p.a)
    out = (2.0 - p.m + p.m * zz * zz - p.m * root) / (2.0 * (1.0 - p.m))
    return complex(out[0]) if scalar else out


def nu_at_one(p: ResolventParams) -> float:
    """nu(1) with the root continued along the positive real axis."""
    root = math.sqrt(max(_radicand(1.0, p.a), 0.0))
    return (2.0 - p.m + p.m - p.m * root) / (2.0 * (1.0 - p.m))


def _roots_for(zz, a):
    if len(zz) == 1:
        return np.array([_root_single(complex(zz[0]), a)])
    return discriminant_root(zz, a)


def psi_tilde(x: int, z, p: ResolventParams, root=None):
    """Generating function ``(L, R)`` at site ``x``; array of shape (..., 2)."""
    if x < 0:
        raise ValueError("x must be non-negative")
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(np.isclose(zz * zz, 1.0, rtol=0.0, atol=1e-14)):
        raise PoleError("psi_tilde has poles at z = +1 and z = -1")
    if root is None:
        root = _roots_for(zz, p.a)
    lam = lambda_z(zz, p.a, root)
    nu = nu_z(zz, p, root)
    common = nu / (zz * zz - 1.0)
    out = np.empty(zz.shape + (2,), dtype=np.complex128)
    if x == 0:
        out[..., 0] = p.m * (zz - p.a * lam) * zz * common
        out[..., 1] = 0.0
    else:
        lam_pow = lam ** (x - 1)
        out[..., 0] = p.m * lam_pow * (p.a * zz - lam) * common
        out[..., 1] = zz * lam_pow * common
    return out[0] if scalar else out


def _trapezoid_coefficient(x, t, p, c):
    z = contour_nodes(c)
    root = discriminant_root(z, p.a)
    vals = psi_tilde(x, z, p, root)
    weights = z ** (-t)
    return (vals * weights[:, None]).mean(axis=0)


def amplitude_via_contour(
    x: int,
    t: int,
    p: ResolventParams,
    c: ContourSpec | None = None,
    check: bool = True,
    tol: float = 1e-9,
) -> NDArray[np.complex128]:
    """Coefficient of ``z^t`` in ``psi_tilde(x; z)`` as an ``(L, R)`` pair.

    With ``check`` set, the same coefficient is recomputed with twice the
    nodes and a discrepancy above ``tol`` raises ``QuadratureError``.
    """
    if t < 1:
        raise ValueError("coefficient extraction is only meaningful for t >= 1")
    if c is None:
        c = ContourSpec.default_for(x, t)
    if c.nodes < 4 * (t + x + 16):
        raise ValueError(f"{c.nodes} nodes are too few for x={x}, t={t}")
    coeff = _trapezoid_coefficient(x, t, p, c)
    if check:
        fine = _trapezoid_coefficient(x, t, p, ContourSpec(c.radius, 2 * c.nodes))
        if np.max(np.abs(fine - coeff)) > tol:
            raise QuadratureError(
                f"trapezoid rule not converged at x={x}, t={t}: "
                f"{np.max(np.abs(fine - coeff)):.3e}"
            )
    return coeff


def contour_probabilities(
    t: int, p: ResolventParams, x_max: int | None = None, c: ContourSpec | None = None
) -> NDArray[np.float64]:
    """``|Psi_t(x)|^2`` per component for ``0 <= x <= x_max``, shape (x_max + 1, 2).

    Shares one contour evaluation of the square root across all sites.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    x_max = t if x_max is None else x_max
    if c is None:
        c = ContourSpec.default_for(x_max, t)
    z = contour_nodes(c)
    root = discriminant_root(z, p.a)
    weights = z ** (-t)
    out = np.empty((x_max + 1, 2))
    for x in range(x_max + 1):
        coeff = (psi_tilde(x, z, p, root) * weights[:, None]).mean(axis=0)
        out[x] = np.abs(coeff) ** 2
    return out


def limit_amplitudes(x: int, parity: Parity | str, p: ResolventParams) -> NDArray[np.float64]:
    """Long-time ``(L, R)`` amplitude at site ``x`` for times of the given parity.

    The residues at ``z = +1`` and ``z = -1`` survive; their sum only depends
    on ``(-1)^(x + t)``.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    t_par = 0 if Parity(parity) is Parity.EVEN else 1
    factor = 1.0 + (-1.0) ** (x + t_par)
    k = p.kappa
    nu1 = nu_at_one(p)
    if x == 0:
        return np.array([factor * p.m * nu1 * (0.5 - 1.0 / k), 0.0])
    decay = (1.0 / math.sqrt(k - 1)) ** (x - 1)
    left = factor * p.m * nu1 * (k - 2) / (2.0 * k * math.sqrt(k - 1)) * decay
    right = factor * nu1 * decay / 2.0
    return np.array([left, right])


def resolvent_for(kappa: int, case: Case | str) -> ResolventParams:
    return ResolventParams.from_walk(WalkParams(kappa, Case(case)))

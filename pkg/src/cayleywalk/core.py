"""Shared parameter types, coin matrices and derived constants.

Spinors are stored in (L, R) order throughout the package: index 0 is the
leftward-moving component, index 1 the rightward-moving one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "Case",
    "Parity",
    "WalkParams",
    "Constants",
    "Distribution",
    "grover_coin",
    "h_kappa",
    "wall_coin",
    "constants",
]


class Case(str, enum.Enum):
    """Initial coin state at the root: uniform (A) or weighted uniform (B)."""

    A = "A"
    B = "B"

    @property
    def gamma(self) -> float:
        return 0.0 if self is Case.A else math.pi


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD


@dataclass(frozen=True)
class WalkParams:
    """Degree of the tree and the initial-qubit case."""

    kappa: int
    case: Case = Case.A

    def __post_init__(self):
        if not isinstance(self.kappa, (int, np.integer)) or self.kappa < 3:
            raise ValueError(f"kappa must be an integer >= 3 (got {self.kappa!r})")
        object.__setattr__(self, "case", Case(self.case))

    @property
    def gamma(self) -> float:
        return self.case.gamma

    @property
    def wall_phase(self) -> complex:
        """exp(i*gamma), exactly +1 or -1."""
        return 1.0 if self.case is Case.A else -1.0

    def to_dict(self) -> dict:
        return {"kappa": int(self.kappa), "case": self.case.value, "gamma": self.gamma}


@dataclass(frozen=True)
class Constants:
    a_kappa: float
    m_kappa: float
    c_kappa: float


def constants(params: WalkParams) -> Constants:
    k = params.kappa
    a = 2.0 * math.sqrt(k - 1) / k
    m = k / (k - 2)
    if params.case is Case.A:
        return Constants(a_kappa=a, m_kappa=m, c_kappa=0.0)
    return Constants(a_kappa=a, m_kappa=-m, c_kappa=(k - 2) / (k - 1))


def grover_coin(kappa: int) -> NDArray[np.complex128]:
    """Return the kappa x kappa Grover coin with entries 2/kappa - delta_ij."""
    if kappa < 2:
        raise ValueError(f"Grover coin requires kappa >= 2 (got {kappa})")
    return np.full((kappa, kappa), 2.0 / kappa, dtype=np.complex128) - np.eye(
        kappa, dtype=np.complex128
    )


def h_kappa(kappa: int) -> NDArray[np.complex128]:
    """Bulk coin of the half-line walk, acting on (L, R) spinors."""
    if kappa < 3:
        raise ValueError(f"H_kappa requires kappa >= 3 (got {kappa})")
    a = 2.0 * math.sqrt(kappa - 1) / kappa
    b = 1.0 - 2.0 / kappa
    return np.array([[a, -b], [b, a]], dtype=np.complex128)


_SIGMA = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def wall_coin(params: WalkParams, x: int) -> NDArray[np.complex128]:
    """Coin at site ``x``: the phased swap at the wall, ``h_kappa`` elsewhere."""
    if x < 0:
        raise ValueError(f"site must be non-negative (got {x})")
    if x == 0:
        return params.wall_phase * _SIGMA
    return h_kappa(params.kappa)


@dataclass
class Distribution:
    """Probability mass function over the sites 0, 1, 2, ... at one time."""

    pmf: NDArray[np.float64]
    time: int
    params: WalkParams | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pmf = np.asarray(self.pmf, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.pmf)

    def __getitem__(self, x: int) -> float:
        return float(self.pmf[x]) if 0 <= x < len(self.pmf) else 0.0

    def total(self) -> float:
        return float(self.pmf.sum())

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))

    def padded(self, n: int) -> NDArray[np.float64]:
        out = np.zeros(max(n, len(self.pmf)))
        out[: len(self.pmf)] = self.pmf
        return out

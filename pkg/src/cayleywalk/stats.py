"""Distances between simulated distributions and limit laws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .core import Distribution, WalkParams
from .limitlaws import LimitMeasure, rho_kappa
from .linewalk import iter_line

__all__ = [
    "CdfComparison",
    "tv_distance",
    "ks_distance",
    "parity_average",
    "atom_window",
    "rescaled_cdf_distance",
    "convergence_report",
    "geometric_ladder",
]


@dataclass(frozen=True)
class CdfComparison:
    ks_distance: float
    tv_distance: float
    atom_estimate: float
    t: float

    def as_row(self) -> tuple:
        return (self.t, self.ks_distance, self.tv_distance, self.atom_estimate)


def tv_distance(p: Distribution, q: Distribution) -> float:
    """Total variation distance; the shorter pmf is padded with zeros."""
    n = max(len(p), len(q))
    return float(0.5 * np.abs(p.padded(n) - q.padded(n)).sum())


def ks_distance(p: Distribution, q: Distribution) -> float:
    """Sup distance between the CDFs of two pmfs on the same lattice."""
    n = max(len(p), len(q))
    return float(np.max(np.abs(np.cumsum(p.padded(n)) - np.cumsum(q.padded(n)))))


def parity_average(first: Distribution, second: Distribution) -> Distribution:
    """Equal mixture of two pmfs, used on consecutive times to damp parity effects."""
    n = max(len(first), len(second))
    pmf = 0.5 * (first.padded(n) + second.padded(n))
    return Distribution(pmf, 0.5 * (first.time + second.time), first.params)


def atom_window(t: float) -> int:
    return int(math.floor(math.sqrt(t)))


def rescaled_cdf_distance(
    dist: Distribution, measure: LimitMeasure | Callable, atom: float | None = None
) -> CdfComparison:
    """Compare the law of ``X_t / t`` with a limit measure.

    ``measure`` is either a ``LimitMeasure`` or a plain CDF callable (then
    ``atom`` gives its mass at zero).

    Mass within the atom window ``x <= floor(sqrt(t))`` is swept onto the
    origin before comparing: the localized profile has width O(1) in ``x`` and
    only becomes a point mass in the limit. The KS distance is then the
    supremum over both sides of every jump of the empirical CDF, and the TV
    distance compares the pmf with the limit law binned on cells
    ``[(x - 1/2)/t, (x + 1/2)/t)``.
    """
    t = dist.time
    if t < 1:
        raise ValueError("rescaling needs t >= 1")
    if isinstance(measure, LimitMeasure):
        cdf = measure.cdf
        atom = measure.atom_at_zero
    else:
        cdf = measure
        atom = 0.0 if atom is None else atom
    window = atom_window(t)
    atom_est = float(dist.pmf[: window + 1].sum())
    pmf = dist.pmf.copy()
    pmf[: window + 1] = 0.0
    pmf[0] = atom_est
    y = np.arange(len(pmf)) / t
    emp = np.cumsum(pmf)
    emp_left = emp - pmf
    ref = np.asarray(cdf(y), dtype=float)
    # the limit CDF is continuous except possibly for the atom at 0, whose
    # left limit is 0
    ref_left = ref.copy()
    ref_left[0] = 0.0
    ks = max(float(np.max(np.abs(emp - ref))), float(np.max(np.abs(emp_left - ref_left))))
    tail = 1.0 - float(ref[-1])
    ks = max(ks, abs(1.0 - emp[-1] - tail) if tail > 0 else 0.0)

    edges = (np.arange(len(pmf) + 1) - 0.5) / t
    cell_cdf = np.asarray(cdf(edges), dtype=float)
    cell_cdf[0] = 0.0
    binned = np.diff(cell_cdf)
    tv = 0.5 * (float(np.abs(pmf - binned).sum()) + max(0.0, 1.0 - float(cell_cdf[-1])))
    return CdfComparison(min(ks, 1.0), min(tv, 1.0), atom_est, t)


def geometric_ladder(steps: int, start: int = 250) -> list[int]:
    """Times ``start, 2 start, 4 start, ...`` below ``steps``, ending at ``steps``."""
    out = []
    t = start
    while t < steps:
        out.append(t)
        t *= 2
    out.append(steps)
    return out


def convergence_report(params: WalkParams, times: Iterable[int]) -> list[CdfComparison]:
    """Rescaled-distance diagnostics at each time, averaging ``t`` and ``t + 1``."""
    times = sorted(set(int(t) for t in times))
    wanted = set(times) | {t + 1 for t in times}
    snap: dict[int, Distribution] = {}
    for state in iter_line(params, times[-1] + 1):
        if state.time in wanted:
            snap[state.time] = state.distribution(params)
    measure = rho_kappa(params)
    out = []
    for t in times:
        avg = parity_average(snap[t], snap[t + 1])
        avg.time = t
        out.append(rescaled_cdf_distance(avg, measure))
    return out

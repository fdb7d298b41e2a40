import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleywalk.ctwalk import (
    bessel_j,
    bessel_j_sequence,
    bessel_j_series,
    ct_amplitude,
    ct_pmf,
)
from cayleywalk.limitlaws import rho_continuous_cdf
from cayleywalk.stats import rescaled_cdf_distance

# J_1(2) from the 30-term power series, frozen
J1_OF_2 = 0.5767248077568734


def test_bessel_known_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert bessel_j_series(1, 2.0, terms=30) == pytest.approx(J1_OF_2, abs=1e-15)
    assert bessel_j(1, 2.0) == pytest.approx(J1_OF_2, abs=1e-15)


@pytest.mark.parametrize("z", [0.01, 0.3, 1.0, 2.5, 4.0])
def test_bessel_against_power_series(z):
    seq = bessel_j_sequence(30, z)
    for n in range(31):
        assert seq[n] == pytest.approx(bessel_j_series(n, z), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("z", [7.5, 100.0, 1000.0, 4000.0])
def test_bessel_against_mpmath(z):
    seq = bessel_j_sequence(500, z)
    scale = np.max(np.abs(seq))
    with mpmath.workdps(30):
        for n in (0, 1, 2, 17, 100, 333, 499, 500):
            ref = float(mpmath.besselj(n, z))
            assert abs(seq[n] - ref) <= 1e-12 * max(scale, abs(ref))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 300.0))
def test_bessel_recurrence(z):
    seq = bessel_j_sequence(80, z)
    assert np.all(np.abs(seq) <= 1.0)
    n = np.arange(1, 80)
    resid = seq[:-2] + seq[2:] - 2 * n / z * seq[1:-1]
    assert np.max(np.abs(resid)) < 1e-10


def test_bessel_rejects_bad_input():
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_j(1, -1.0)


def test_ct_amplitude():
    assert ct_amplitude(0, 1.0) == pytest.approx(J1_OF_2, abs=1e-15)
    amp = ct_amplitude(2, 3.0)
    assert amp.imag == 0
    assert amp.real == pytest.approx(-3 * bessel_j(3, 6.0) / 3.0)
    with pytest.raises(ValueError):
        ct_amplitude(0, 0.0)
    d = ct_pmf(7.0)
    for x in range(10):
        assert abs(ct_amplitude(x, 7.0)) ** 2 == pytest.approx(d.pmf[x], rel=1e-12)


@pytest.mark.parametrize("t", [5, 20, 100, 500])
def test_ct_pmf_normalised(t):
    assert abs(ct_pmf(t).total() - 1) < 1e-8


@pytest.mark.parametrize("t", [20, 100, 500])
def test_ct_pmf_support(t):
    d = ct_pmf(t, x_max=4 * t + 100)
    cut = int(2 * t + 10 * t ** (1 / 3))
    assert d.pmf[cut + 1 :].sum() < 1e-6


def test_ct_pmf_rejects_short_cutoff():
    with pytest.raises(ValueError):
        ct_pmf(10.0, x_max=30)


def test_ks_to_limit_shrinks():
    ks = [rescaled_cdf_distance(ct_pmf(t), rho_continuous_cdf).ks_distance for t in (50, 100, 200, 400)]
    for before, after in zip(ks, ks[1:]):
        assert after < 1.1 * before
    assert ks[-1] < ks[0]

import math

import numpy as np
import pytest

from cayleywalk.core import Case, WalkParams, constants, grover_coin, h_kappa, wall_coin


def _unitarity_defect(m):
    return np.max(np.abs(m.conj().T @ m - np.eye(len(m))))


def test_grover_coin_small_cases():
    np.testing.assert_array_equal(grover_coin(2), [[0, 1], [1, 0]])
    expected = np.array([[-1, 2, 2], [2, -1, 2], [2, 2, -1]]) / 3
    np.testing.assert_allclose(grover_coin(3), expected, atol=1e-15)
    np.testing.assert_allclose(grover_coin(4).sum(axis=1), np.ones(4), atol=1e-15)


@pytest.mark.parametrize("kappa", range(2, 12))
def test_grover_coin_is_symmetric_unitary_involution(kappa):
    g = grover_coin(kappa)
    np.testing.assert_allclose(g, g.T)
    assert _unitarity_defect(g) < 1e-12
    np.testing.assert_allclose(g @ g, np.eye(kappa), atol=1e-12)


def test_grover_coin_rejects_small_degree():
    with pytest.raises(ValueError):
        grover_coin(1)


def test_h_kappa_values():
    s = math.sqrt
    np.testing.assert_allclose(h_kappa(3), [[2 * s(2) / 3, -1 / 3], [1 / 3, 2 * s(2) / 3]])
    np.testing.assert_allclose(h_kappa(4), [[s(3) / 2, -0.5], [0.5, s(3) / 2]])
    with pytest.raises(ValueError):
        h_kappa(2)


@pytest.mark.parametrize("kappa", range(3, 21))
def test_h_kappa_rotation(kappa):
    h = h_kappa(kappa)
    assert abs(np.linalg.det(h) - 1) < 1e-12
    assert _unitarity_defect(h) < 1e-12


def test_wall_coin():
    np.testing.assert_array_equal(wall_coin(WalkParams(3, "A"), 0), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(wall_coin(WalkParams(3, "B"), 0), [[0, -1], [-1, 0]])
    for case in "AB":
        np.testing.assert_array_equal(wall_coin(WalkParams(5, case), 5), h_kappa(5))
    with pytest.raises(ValueError):
        wall_coin(WalkParams(3), -1)


@pytest.mark.parametrize("kappa", range(3, 21))
def test_constants(kappa):
    a = constants(WalkParams(kappa, "A"))
    b = constants(WalkParams(kappa, "B"))
    assert 0 < a.a_kappa < 1
    assert abs(math.sqrt(1 - a.a_kappa**2) - (kappa - 2) / kappa) < 1e-12
    assert a.m_kappa == -b.m_kappa == kappa / (kappa - 2)
    assert a.c_kappa == 0 and b.c_kappa == (kappa - 2) / (kappa - 1)


def test_walk_params_validation():
    assert WalkParams(3, "A").gamma == 0
    assert WalkParams(3, Case.B).gamma == math.pi
    with pytest.raises(ValueError):
        WalkParams(2)
    with pytest.raises(ValueError):
        WalkParams(3, "C")

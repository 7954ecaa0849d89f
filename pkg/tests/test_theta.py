import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptheta import (DEFAULT_TRUNC, DivergenceError, RegimeError,
                        ThetaLevelIndex, jacobi_theta, jacobi_theta_dlam,
                        level_residual, theta0, theta_basis)

TAU = 0.35 + 0.8j


def th(lam, tau=TAU):
    return complex(jacobi_theta(lam, tau).value)


def tb(j, kappa, lam, tau=TAU):
    return complex(theta_basis(ThetaLevelIndex(j, kappa), lam, tau).value)


def test_jacobi_theta_against_mpmath():
    # theta(lam, tau) = theta_1(pi lam, e^{pi i tau})
    q = complex(mpmath.exp(1j * mpmath.pi * TAU))
    for lam in (0.0, 0.23 + 0.11j, -0.7, 1.4 - 0.2j):
        oracle = complex(mpmath.jtheta(1, mpmath.pi * lam, q))
        assert abs(th(lam) - oracle) <= 1e-12 * (1 + abs(oracle))


def test_jacobi_theta_zero_and_oddness():
    assert abs(th(0.0)) < 1e-14
    lam = 0.2 + 0.1j
    assert abs(th(-lam) + th(lam)) < 1e-14
    assert abs(th(lam + 1) + th(lam)) < 1e-13


def test_jacobi_theta_regime_error():
    with pytest.raises(RegimeError):
        jacobi_theta(0.2, -0.5j)


def test_dtheta_finite_difference():
    lam, h = 0.17 + 0.05j, 1e-5
    fd = (th(lam + h) - th(lam - h)) / (2 * h)
    d = complex(jacobi_theta_dlam(lam, TAU).value)
    assert abs(d - fd) <= 1e-8 * (1 + abs(d))
    # derivative of an odd function is even
    dm = complex(jacobi_theta_dlam(-lam, TAU).value)
    assert abs(d - dm) < 1e-12 * (1 + abs(d))


def test_dtheta0_product_formula():
    # theta'(0,tau) = 2 pi q^{1/8} prod (1-q^j)^3, q = e^{2 pi i tau}
    q = np.exp(2j * np.pi * TAU)
    prod = np.prod([(1 - q ** j) ** 3 for j in range(1, 200)])
    want = 2 * np.pi * q ** 0.125 * prod
    got = complex(jacobi_theta_dlam(0.0, TAU).value)
    assert abs(got - want) < 1e-12 * abs(want)


def test_basis_periodicity_in_index():
    lam = 0.1
    assert abs(tb(1, 3, lam, 1j) - tb(1 + 6, 3, lam, 1j)) < 1e-14


def test_jacobi_is_odd_level_2_combination():
    for lam in (0.2, 0.4 - 0.1j, -0.8 + 0.2j):
        rhs = 1j * (tb(-1, 2, lam) - tb(1, 2, lam))
        assert abs(th(lam) - rhs) <= 1e-12 * (1 + abs(rhs))


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=1, max_value=6),
       st.floats(-1, 1), st.floats(-0.3, 0.3))
def test_level_quasi_periodicity_property(kappa, re, im):
    lam = re + 1j * im
    for j in (0, 1, kappa):
        def h(z, j=j):
            return tb(j, kappa, z)
        assert level_residual(h, kappa, TAU, [lam], rs_range=1) < 1e-9


def test_parity_reflection():
    for kappa in (3, 5):
        for j in range(2 * kappa):
            lam = 0.31 - 0.07j
            assert abs(tb(j, kappa, -lam) - tb(-j, kappa, lam)) < 1e-12


def test_theta0_symmetry_and_divergence():
    a = complex(theta0(2.0, 3.0).value)
    b = complex(theta0(0.5, 3.0).value)
    assert abs(a - b) < 1e-12 * (1 + abs(a))
    with pytest.raises(DivergenceError):
        theta0(1.0, 0.5)


def test_theta0_cutoff_stability():
    v1 = complex(theta0(1.0, 4.0).value)
    v2 = complex(theta0(1.0, 4.0, DEFAULT_TRUNC.doubled()).value)
    assert abs(v1 - v2) < 1e-12 * (1 + abs(v1))

import numpy as np
import pytest

from elliptheta import (HTSIndex, ModularParams, RegimeError, check_S_transform,
                        check_T_shift, compose, group_relations, psi, transform)
from elliptheta.modular import delta_handle, s_minus_matrix
from elliptheta.theta import e_kappa_residual

K = 5
P_IMAG = ModularParams(tau=0.9j, eta=-0.04j, kappa=K)
P_MINUS = ModularParams(tau=0.4 + 1.1j, eta=-0.05j, kappa=K)
LAMS = [0.2, 0.35, 0.5]


def test_psi_values():
    assert psi(0.0, 0.0, 0.0) == 2.0
    assert psi(0.3j, 0.1, -0.05j) == psi(0.3j, 0.1, 0.05j)


def test_T_shift():
    assert check_T_shift(2, K, P_IMAG, LAMS) < 1e-5


def test_S_transform_minus():
    assert check_S_transform(-1, 2, K, P_MINUS, LAMS) < 1e-3


def test_S_transform_wrong_regime():
    with pytest.raises(RegimeError):
        check_S_transform(+1, 2, K, P_MINUS, LAMS)


def test_A_shift_eigenvalue():
    h = delta_handle(HTSIndex(2, K))
    lhs = transform("A", h, K)(LAMS, P_IMAG.tau, P_IMAG.eta)
    rhs = (-1.0) ** 3 * h(LAMS, P_IMAG.tau, P_IMAG.eta)
    assert np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))) < 1e-6


def test_B_shift_index_map():
    h = delta_handle(HTSIndex(2, K))
    hk = delta_handle(HTSIndex(2 + K, K), kappa=K)
    lhs = transform("B", h, K)(LAMS, P_IMAG.tau, P_IMAG.eta)
    rhs = hk(LAMS, P_IMAG.tau, P_IMAG.eta)
    assert np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))) < 1e-6


def test_group_relations():
    rels = group_relations(K, P_MINUS, LAMS)
    assert rels["A^2 = 1"] < 1e-12
    assert rels["AT = TA"] < 1e-12
    assert rels["S^2 = 8 pi^2 kappa"] < 1e-3
    assert rels["SA = BS"] < 1e-4
    assert rels["AB = (-1)^kappa BA"] < 1e-4


def test_s_matrix_qkzb_periodicity():
    tau, eta = P_MINUS.tau, P_MINUS.eta
    a = s_minus_matrix(K, tau, eta)
    b = s_minus_matrix(K, tau - 2 * eta * K, eta)
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) < 1e-6


def test_transforms_preserve_e_kappa_membership():
    # A maps the function space to itself at the same parameter point
    h = delta_handle(HTSIndex(2, K))
    ah = transform("A", h, K)

    def f(lam):
        return complex(ah(np.array([lam]), P_IMAG.tau, P_IMAG.eta)[0])

    assert e_kappa_residual(f, P_IMAG, LAMS) < 1e-6


def test_s_rhs_solves_qkzb():
    # the S-image is a combination of delta_j(., tau, eta), so it satisfies
    # the heat equation at (tau, eta)
    from elliptheta.hts import delta_arr
    from elliptheta.modular import s_minus_matrix
    from elliptheta.operators import apply_T_bar

    tau, eta = P_MINUS.tau, P_MINUS.eta
    smat = s_minus_matrix(K, tau, eta)
    col = smat[:, 0]
    src_params = ModularParams(tau=tau - 2 * eta * K, eta=eta, kappa=K)

    def comb(params):
        def f(mu):
            mu = np.atleast_1d(np.asarray(mu, dtype=np.complex128))
            tot = np.zeros_like(mu)
            for a, j in enumerate(range(2, K - 1)):
                v, _ = delta_arr(HTSIndex(j, K), mu, params, method="series")
                tot = tot + col[a] * v
            return tot
        return f

    lam = 0.3
    got = complex(apply_T_bar(comb(src_params), lam, P_MINUS, m_range=30).value)
    want = complex(comb(P_MINUS)(np.array([lam]))[0])
    assert abs(got - want) / (1 + abs(want)) < 1e-3

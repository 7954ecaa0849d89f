from fractions import Fraction

import numpy as np
import pytest

from elliptheta import (HTSIndex, LaurentPoly, ModularParams, apply_T_bar,
                        apply_T_kappa, apply_U, apply_f_of_Y, cherednik_Y,
                        cherednik_Y_inv, macdonald_m2, qkzb_residual, t_q_apply)
from elliptheta.operators import t_q_pair

PARAMS = ModularParams(tau=1.2j, eta=-0.02j, kappa=5)
IDX = HTSIndex(2, 5)
LAMS = [0.2, 0.35, 0.5]
Q = Fraction(5, 3)


def test_qkzb_heat_residual():
    assert qkzb_residual(IDX, PARAMS, LAMS, operator="heat") < 1e-4


def test_qkzb_discrete_residual():
    assert qkzb_residual(IDX, PARAMS, LAMS, operator="discrete", m_range=30) < 1e-4


def test_qkzb_negative_control():
    assert qkzb_residual(IDX, PARAMS, [0.3], operator="heat", perturb=1.0) > 1e-2


def test_heat_vs_discrete_agree():
    from elliptheta.operators import hts_source
    f = hts_source(IDX, PARAMS)
    lam = 0.3
    a = complex(apply_T_kappa(f, lam, PARAMS).value)
    b = complex(apply_T_bar(f, lam, PARAMS, m_range=30).value)
    assert abs(a - b) / (1 + abs(a)) < 1e-8


def test_apply_U_constant_is_gaussian_like():
    # U applied to the zero function is zero
    z = complex(apply_U(lambda mu: np.zeros_like(np.atleast_1d(mu)),
                        0.3, PARAMS.tau, PARAMS.sigma, PARAMS.eta).value)
    assert abs(z) < 1e-12


def test_cherednik_Y_inverse_exact():
    for n in range(-4, 5):
        f = LaurentPoly.x(n)
        assert cherednik_Y_inv(cherednik_Y(f, Q), Q) == f
        assert cherednik_Y(cherednik_Y_inv(f, Q), Q) == f


def test_cherednik_eigenvalue_exact():
    for j in range(5):
        P = macdonald_m2(j, Q)
        for m in range(1, 6):
            f = LaurentPoly.x(m) + LaurentPoly.x(-m)
            ev = Q ** ((j + 2) * m) + Q ** (-(j + 2) * m)
            assert apply_f_of_Y(f, P, Q) == P.map_coeffs(lambda c: c * ev)


def test_t_q_pair_eigenvalue_exact():
    for j in range(4):
        P = macdonald_m2(j, Q)
        for m in range(5):
            want = P if m == 0 else P.map_coeffs(
                lambda c: c * (Q ** ((j + 2) * m) + Q ** (-(j + 2) * m)))
            assert t_q_pair(P, Q, m) == want


def test_t_q_apply_weights():
    P = macdonald_m2(1, Fraction(9, 4))
    terms = t_q_apply(P, Fraction(9, 4), 3, sqrt_q=Fraction(3, 2))
    assert [m for m, _ in terms] == [0, 1, 2, 3]
    # m=0 contribution is P itself (weight q^0 = 1)
    assert terms[0][1] == P


def test_t_q_apply_bad_sqrt():
    from elliptheta import ConsistencyError
    with pytest.raises(ConsistencyError):
        t_q_apply(macdonald_m2(1, Q), Q, 2, sqrt_q=Fraction(1, 2))

import numpy as np
import pytest

from elliptheta import (HTSIndex, ModularParams, PoleError, RegimeError,
                        delta, delta_tilde, gram_inversion, i_integral,
                        i_regularized, is_admissible)
from elliptheta.hts import check_regime, delta_arr
from elliptheta.theta import e_kappa_residual
from elliptheta.types import DEFAULT_TRUNC

PARAMS = ModularParams(tau=0.9j, eta=-0.04j, kappa=5)
IDX = HTSIndex(2, 5)


def test_admissibility():
    assert is_admissible(2, 5) and is_admissible(3, 5)
    assert not is_admissible(1, 5) and not is_admissible(4, 5)
    with pytest.raises(PoleError):
        delta_tilde(HTSIndex(4, 5), 0.3, PARAMS)


def test_regime_guard():
    with pytest.raises(RegimeError):
        check_regime(ModularParams(tau=0.9j, eta=0.04j, kappa=5))


def test_series_vs_integral():
    for lam in (0.23, 0.41 + 0.03j):
        s = complex(delta_tilde(IDX, lam, PARAMS, method="series").value)
        i = complex(delta_tilde(IDX, lam, PARAMS, method="integral").value)
        assert abs(s - i) / (1 + abs(s)) < 1e-6


def test_regularized_equals_bare_integral():
    # the shifted-contour integral with counterterm and residue correction
    # reproduces the bare contour integral exactly
    lam = 0.3
    bare = complex(i_integral(IDX, lam, PARAMS).value)
    reg = complex(i_regularized(IDX, lam, PARAMS).value)
    assert abs(bare - reg) / (1 + abs(bare)) < 1e-8


def test_delta_oddness():
    lams = np.array([0.2, 0.45 - 0.02j])
    v, _ = delta_arr(IDX, lams, PARAMS)
    w, _ = delta_arr(IDX, -lams, PARAMS)
    assert np.max(np.abs(v + w)) < 1e-10 * (1 + np.max(np.abs(v)))


def test_delta_index_periodicity():
    lam = 0.37
    a = complex(delta(HTSIndex(2, 5), lam, PARAMS).value)
    b = complex(delta(HTSIndex(12, 5), lam, PARAMS).value)
    assert abs(a - b) < 1e-10 * (1 + abs(a))


def test_delta_is_e_kappa_member():
    # lam = 1/2 is excluded: delta_{3,5} has a genuine zero there and the
    # relative quasi-periodicity check degenerates at zeros
    for l in (2, 3):
        def h(lam, l=l):
            return complex(delta(HTSIndex(l, 5), lam, PARAMS).value)
        assert e_kappa_residual(h, PARAMS, [0.2, 0.35, 0.47]) < 1e-6


def test_gram_inversion_diagonal():
    gram, expected, ls = gram_inversion(PARAMS)
    scale = float(np.max(np.abs(expected)))
    assert np.max(np.abs(gram - np.diag(expected))) / scale < 1e-6


def test_series_trunc_stability():
    lam = 0.3
    v1 = complex(delta_tilde(IDX, lam, PARAMS).value)
    v2 = complex(delta_tilde(IDX, lam, PARAMS, DEFAULT_TRUNC.doubled()).value)
    assert abs(v1 - v2) / (1 + abs(v1)) < 1e-9

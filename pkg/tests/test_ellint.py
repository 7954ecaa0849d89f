import numpy as np
import pytest

from elliptheta import (DEFAULT_TRUNC, PoleError, build_u_contour, omega,
                        pole_pinch_distance, q_weight, u_hyper,
                        u_trig_degenerate, u_trig_semi)
from elliptheta.core import Contour, Indent
from elliptheta.ellint import get_u_kernel

TAU, SIGMA, ETA = 0.9j, 1.1j, -0.04j


def test_omega_inverse_pair():
    t = 0.3
    a = complex(omega(t, TAU, SIGMA, ETA).value)
    b = complex(omega(t, TAU, SIGMA, -ETA).value)
    assert abs(a * b - 1.0) < 1e-10


def test_omega_cutoff_stability():
    v1 = complex(omega(0.25, 0.9j, 1.2j, -0.05j).value)
    v2 = complex(omega(0.25, 0.9j, 1.2j, -0.05j, DEFAULT_TRUNC.doubled()).value)
    assert abs(v1 - v2) < 1e-9 * (1 + abs(v1))


def test_q_weight_symmetries_and_pole():
    mu = 0.3
    a = complex(q_weight(mu, 1.2j, -0.05j).value)
    b = complex(q_weight(-mu, 1.2j, -0.05j).value)
    c = complex(q_weight(mu + 1, 1.2j, -0.05j).value)
    assert abs(a - b) < 1e-12 * (1 + abs(a))
    assert abs(a - c) < 1e-12 * (1 + abs(a))
    with pytest.raises(PoleError):
        q_weight(2 * (-0.05j), 1.2j, -0.05j)


def test_pole_pinch_distance():
    tau, sigma = 0.9j, 1.3j
    eta = -(1 + tau) / 4
    assert pole_pinch_distance(tau, sigma, eta) < 1e-12
    assert pole_pinch_distance(tau, sigma, -0.04j) > 0.05


def test_u_symmetry():
    u1 = complex(u_hyper(0.2, 0.3, TAU, SIGMA, ETA).value)
    u2 = complex(u_hyper(-0.2, -0.3, TAU, SIGMA, ETA).value)
    assert abs(u1 - u2) / (1 + abs(u1)) < 1e-8


def test_u_vanishing_relation():
    kern = get_u_kernel(TAU, SIGMA, ETA)
    lam = 0.2
    for r in (-1, 0, 1):
        for s in (-1, 0, 1):
            a = complex(kern.u_scalar(lam, 2 * ETA + r + s * SIGMA).value)
            b = complex(kern.u_scalar(lam, -2 * ETA + r + s * SIGMA).value)
            ph = complex(np.exp(2j * np.pi * s * (TAU - 4 * ETA)))
            assert abs(a - ph * b) / (1 + abs(a) + abs(ph * b)) < 1e-7


def test_u_contour_homotopy_invariance():
    base = build_u_contour(TAU, SIGMA, ETA)
    v0 = complex(u_hyper(0.2, 0.3, TAU, SIGMA, ETA, contour=base).value)
    for scale in (0.5, 0.75):
        ind = tuple(Indent(d.center, d.radius * scale, d.side) for d in base.indents)
        alt = Contour.indented_segment(ind, base_start=base.base_start,
                                       refine_near=base.refine_near)
        v = complex(u_hyper(0.2, 0.3, TAU, SIGMA, ETA, contour=alt).value)
        assert abs(v - v0) / (1 + abs(v0)) < 1e-8


def test_u_trig_degenerate_matches_u_hyper():
    # deep trigonometric regime tau = sigma = 30i
    eta = -0.05j
    for lam, mu in ((0.2, 0.3), (0.15, -0.1), (-0.3, 0.25), (0.05, 0.4), (0.33, 0.21)):
        full = complex(u_hyper(lam, mu, 30j, 30j, eta).value)
        lim = complex(u_trig_degenerate(lam, mu, eta).value)
        assert abs(full - lim) / (1 + abs(lim)) < 1e-5


def test_u_trig_degenerate_closed_form_values():
    eta = -0.05j
    v = complex(u_trig_degenerate(0.0, 0.0, eta).value)
    q2 = np.exp(-4j * np.pi * eta)
    want = 1j * (q2 - 1.0) / np.sin(4 * np.pi * eta)
    assert abs(v - want) < 1e-12 * (1 + abs(want))
    with pytest.raises(PoleError):
        u_trig_degenerate(0.1, 0.2, 0.5)


def test_u_trig_semi_matches_u_hyper():
    eta, l, kappa = -0.05j, 2, 5
    full = complex(u_hyper(0.2, 2 * eta * l, 30j, -2 * eta * kappa, eta).value)
    lim = complex(u_trig_semi(0.2, l, kappa, eta).value)
    assert abs(full - lim) / (1 + abs(lim)) < 1e-5

import numpy as np

from elliptheta.core import (Contour, contour_nodes, integrate_contour,
                             sum_Z_series, tanh_sinh_nodes)
from elliptheta.types import DEFAULT_TRUNC


def test_segment_integral_polynomial():
    # int_0^1 (3t^2 + 2t) dt = 2 exactly
    c = Contour.segment(0.0, 1.0)
    v = integrate_contour(lambda t: 3 * t ** 2 + 2 * t, c, DEFAULT_TRUNC)
    assert abs(complex(v.value) - 2.0) < 1e-12


def test_shifted_segment_cauchy():
    # e^{2 pi i t} integrates to 0 over any unit period, shifted or not
    for off in (0.0, 0.3 - 0.2j):
        c = Contour.shifted_segment(off)
        v = integrate_contour(lambda t: np.exp(2j * np.pi * t), c, DEFAULT_TRUNC)
        assert abs(complex(v.value)) < 1e-12


def test_indented_contour_residue():
    # simple pole mid-segment: the principal value vanishes and the
    # indentation contributes a signed half-residue
    from elliptheta.core import Indent
    pole = 0.5 + 0.0j
    f = lambda t: 1.0 / (t - pole)
    for side, want in (("below", 1j * np.pi), ("above", -1j * np.pi)):
        c = Contour.indented_segment([Indent(pole, 0.05, side)])
        v = complex(integrate_contour(f, c, DEFAULT_TRUNC).value)
        assert abs(v - want) < 1e-10


def test_sum_Z_series_geometric():
    # sum over n in Z of 2^{-|n|} = 3
    v = sum_Z_series(lambda n: 2.0 ** (-abs(n)), DEFAULT_TRUNC)
    assert abs(complex(v.value) - 3.0) < 1e-9


def test_contour_nodes_weights_sum():
    c = Contour.segment(0.0, 1.0)
    t, w = contour_nodes(c, 64)
    assert abs(np.sum(w) - 1.0) < 1e-12


def test_tanh_sinh_nodes_quadrature():
    # int_0^1 1/sqrt(t) dt = 2, an endpoint singularity tanh-sinh handles
    # the node window (u_max) leaves a ~1e-8 endpoint truncation floor
    t, w = tanh_sinh_nodes(120)
    val = np.sum(w / np.sqrt(t))
    assert abs(val - 2.0) < 1e-7

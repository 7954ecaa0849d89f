"""Rank-one Macdonald polynomials at t = q^2, exactly and numerically, and
their elliptic deformation built from the hypergeometric theta functions.

The exact layer works over Fractions: the constant-term inner product, the
Gram-Schmidt construction, and the closed form

    P_j(x) = (x^{j+3} - a x^{j+1} + a x^{-j-1} - x^{-j-3}) / Pi(x, q),
    Pi = (q x - (q x)^{-1})(x - x^{-1})(q^{-1} x - q x^{-1}),
    a = (q^{j+3} - q^{-j-3}) / (q^{j+1} - q^{-j-1}).

The elliptic deformation P_{j,kappa}(x, q, p) is a theta-function ratio in
the coordinates x = e^{pi i lam}, q = e^{-2 pi i eta}, p = e^{2 pi i tau};
as p -> 0 it degenerates to a multiple of P_j.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .hts import check_regime, delta_arr
from .laurent import LaurentPoly
from .theta import theta_arr
from .types import (
    DEFAULT_TRUNC,
    ConsistencyError,
    EvalResult,
    HTSIndex,
    ModularParams,
    PoleError,
    Truncation,
)


# ----------------------------------------------------------- exact layer


def ct_inner_product(p: LaurentPoly, r: LaurentPoly, m: int, q) -> Fraction:
    """Constant term of p(x) r(1/x) prod_{j=0}^{m-1} (1 - q^{2j} x^2)(1 - q^{2j} x^{-2})."""
    q = Fraction(q)
    w = LaurentPoly({0: 1})
    for j in range(m):
        w = w * LaurentPoly({0: 1, 2: -q ** (2 * j)}) * LaurentPoly({0: 1, -2: -q ** (2 * j)})
    return (p * r.substitute(1, invert=True) * w).coeff(0)


def _sym_basis(k: int) -> LaurentPoly:
    return LaurentPoly({0: 1}) if k == 0 else LaurentPoly({k: 1, -k: 1})


def macdonald_general(j: int, q, m: int = 2) -> LaurentPoly:
    """P_j by Gram-Schmidt on the symmetric monomial basis under the
    constant-term inner product with m weight factors."""
    q = Fraction(q)
    prev: list[LaurentPoly] = []
    for k in range(j + 1):
        p = _sym_basis(k)
        for pk in prev:
            denom = ct_inner_product(pk, pk, m, q)
            if denom == 0:
                raise ConsistencyError(f"degenerate inner product at q={q}, degree {len(prev)}")
            p = p - (ct_inner_product(_sym_basis(k), pk, m, q) / denom) * pk
        prev.append(p)
    return prev[j]


def macdonald_m2(j: int, q) -> LaurentPoly:
    """The closed form of P_j at m = 2 via exact Laurent division."""
    q = Fraction(q)
    a = (q ** (j + 3) - q ** (-j - 3)) / (q ** (j + 1) - q ** (-j - 1))
    num = LaurentPoly({j + 3: 1, j + 1: -a, -j - 1: a, -j - 3: -1})
    pi = (LaurentPoly({1: q, -1: -1 / q})
          * LaurentPoly({1: 1, -1: -1})
          * LaurentPoly({1: 1 / q, -1: -q}))
    return num.divide_exact(pi)


def macdonald_m2_numeric(j: int, q: complex, x: complex) -> complex:
    """Closed-form numeric evaluation of P_j at m = 2 for complex q, x."""
    q, x = complex(q), complex(x)
    a = (q ** (j + 3) - q ** (-j - 3)) / (q ** (j + 1) - q ** (-j - 1))
    num = x ** (j + 3) - a * x ** (j + 1) + a * x ** (-j - 1) - x ** (-j - 3)
    den = (q * x - 1 / (q * x)) * (x - 1 / x) * (x / q - q / x)
    if abs(den) < 1e-13 * (abs(x) + 1 / abs(x)) ** 3:
        raise PoleError(f"closed form evaluated at a zero of its denominator, x={x}")
    return num / den


# --------------------------------------------------------- elliptic layer


def coords_from_xqp(x: complex, q: complex, p: complex) -> tuple[complex, complex, complex]:
    """(lam, eta, tau) from (x, q, p) via principal logarithms:
    lam = log x / (pi i), eta = -log q / (2 pi i), tau = log p / (2 pi i)."""
    lam = complex(np.log(complex(x)) / (1j * np.pi))
    eta = complex(-np.log(complex(q)) / (2j * np.pi))
    tau = complex(np.log(complex(p)) / (2j * np.pi))
    return lam, eta, tau


def elliptic_macdonald_arr(j: int, kappa: int, lams, params: ModularParams,
                           trunc: Truncation = DEFAULT_TRUNC) -> np.ndarray:
    """P_{j,kappa} at x = e^{pi i lam} for an array of lam:

    e^{-pi i (4 eta + tau)(j+2)^2 / 2 kappa + 3 pi i tau / 4} *
    delta_{j+2,kappa}(lam) / (theta(lam - 2 eta) theta(lam) theta(lam + 2 eta)).
    """
    if not 0 <= j <= kappa - 4:
        raise ValueError(f"need 0 <= j <= kappa - 4, got j={j}, kappa={kappa}")
    check_regime(params)
    tau, eta = params.tau, params.eta
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
    dv, _ = delta_arr(HTSIndex(j + 2, kappa), lams, params, trunc)
    den = theta_arr(lams - 2 * eta, tau) * theta_arr(lams, tau) * theta_arr(lams + 2 * eta, tau)
    scale = np.max(np.abs(den))
    if np.min(np.abs(den)) < 1e-10 * scale:
        raise PoleError("theta denominator ~0; the singularity is removable -- "
                        "evaluate at a nearby lam instead")
    pref = np.exp(-1j * np.pi * (4 * eta + tau) * (j + 2) ** 2 / (2 * kappa)
                  + 0.75j * np.pi * tau)
    return pref * dv / den


def elliptic_macdonald(j: int, kappa: int, x: complex, q: complex, p: complex,
                       trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """P_{j,kappa}(x, q, p) in multiplicative coordinates."""
    lam, eta, tau = coords_from_xqp(x, q, p)
    params = ModularParams(tau=tau, eta=eta, kappa=kappa)
    v = elliptic_macdonald_arr(j, kappa, [lam], params, trunc)[0]
    return EvalResult(complex(v), 1e-9 * (1 + abs(v)), {"lam": lam, "eta": eta, "tau": tau})


def trig_limit_ratio(j: int, kappa: int, q: complex, p: complex, lam_samples,
                     trunc: Truncation = DEFAULT_TRUNC) -> tuple[complex, float]:
    """Mean and relative spread of P_{j,kappa}(x, q, p) / P_j(x, q) over the
    sample points x = e^{pi i lam}.  As p -> 0 the spread tends to zero and
    the mean to the proportionality constant of the degeneration."""
    lam0, eta, tau = coords_from_xqp(1.0, q, p)
    params = ModularParams(tau=tau, eta=eta, kappa=kappa)
    lams = np.atleast_1d(np.asarray(lam_samples, dtype=np.complex128))
    ev = elliptic_macdonald_arr(j, kappa, lams, params, trunc)
    tv = np.array([macdonald_m2_numeric(j, q, np.exp(1j * np.pi * lam)) for lam in lams])
    ratios = ev / tv
    mean = complex(np.mean(ratios))
    spread = float(np.max(np.abs(ratios - mean)) / (abs(mean) + 1e-300))
    return mean, spread


def orthogonality_vs_inversion(params: ModularParams, trunc: Truncation = DEFAULT_TRUNC,
                               n_nodes: int = 256) -> tuple[np.ndarray, np.ndarray, list]:
    """Gram matrix of the inversion pairing applied to the elliptic Macdonald
    functions: entry (l, j) is

      -1/(8 pi^2) int_0^2 u(-mu, 2 eta l, tau, -2 eta kappa, -eta)
                           P_{j,kappa}(e^{pi i mu}, q, p) theta(mu, tau) dmu.

    Substituting the theta-ratio definition of P_{j,kappa} into the inversion
    relation gives the expected value delta_{l,j+2} e^{3 pi i tau/4} /
    (theta(4 eta, tau) theta'(0, tau)); the integral here goes through the
    P evaluator, making this an independent consistency check of the
    normalization factors.
    """
    from .ellint import get_u_kernel
    from .theta import dtheta_arr

    check_regime(params)
    tau, eta, kappa, sigma = params.tau, params.eta, params.kappa, params.sigma
    ls = list(range(2, kappa - 1))
    js = list(range(0, kappa - 3))
    offset = 3.0 * abs(eta.imag)
    mus = 1j * offset + 2.0 * np.arange(n_nodes) / n_nodes

    th_mu = theta_arr(mus, tau)
    kern_u = get_u_kernel(tau, sigma, -eta, trunc)
    pv = {j: elliptic_macdonald_arr(j, kappa, mus, params, trunc) for j in js}
    gram = np.empty((len(ls), len(js)), dtype=np.complex128)
    for a, l in enumerate(ls):
        uv, _ = kern_u.u_many(-mus, np.full(n_nodes, 2 * eta * l, dtype=np.complex128))
        for b, j in enumerate(js):
            total = np.sum(uv * pv[j] * th_mu) * (2.0 / n_nodes)
            gram[a, b] = -total / (8 * np.pi ** 2)

    th4 = theta_arr(np.array([4 * eta]), tau)[0]
    dth0 = dtheta_arr(np.array([0.0j]), tau)[0]
    const = np.exp(0.75j * np.pi * tau) / (th4 * dth0)
    expected = np.zeros_like(gram)
    for a, l in enumerate(ls):
        for b, j in enumerate(js):
            if l == j + 2:
                expected[a, b] = const
    return gram, expected, [ls, js]

"""Heat-type integral operators built on u, their discrete-sum variant, and
the exact q-difference (Cherednik-style) operators of the trigonometric limit.

The integral operator U pairs a function against u(lam, mu) Q(mu) along the
line mu = eta*x; conjugating with the Gaussian alpha(lam) = e^{-pi i lam^2 /
4 eta} and normalizing gives the heat operator T that transports the
hypergeometric theta functions from nome tau - 2 eta kappa to nome tau.
T_bar replaces the line integral by a discrete sum over mu = -lam + 2 eta m.

The q-difference operators act on exact Laurent polynomials in x with
rational q and are checked with zero tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import _eval_vectorized
from .ellint import get_u_kernel, q_weight_arr
from .hts import check_regime, delta_arr, delta_tilde_arr
from .laurent import LaurentPoly
from .theta import theta_basis_arr
from .types import (
    DEFAULT_TRUNC,
    ConsistencyError,
    EvalResult,
    HTSIndex,
    ModularParams,
    PoleError,
    RegimeError,
    Truncation,
)


# --------------------------------------------------------- integral operator


def _envelope_coeff(tau: complex, sigma: complex, eta: complex) -> float:
    """Quadratic coefficient a < 0 of the Gaussian envelope exp(a x^2 + c|x|)
    bounding the conjugated heat integrand on the line mu = eta*x."""
    a = 0.25 * np.pi * eta.imag * (tau.imag - 4.0 * eta.imag) / sigma.imag
    if a >= 0:
        raise RegimeError(f"Gaussian envelope not decaying (a={a:.3g}); "
                          "needs Im eta < 0, Im tau > 0, Im sigma > 0")
    return a


def _envelope_radius(a: float, c_lin: float, target: float) -> float:
    return (c_lin + math.sqrt(c_lin * c_lin + 4.0 * abs(a) * target)) / (2.0 * abs(a))


def heat_line_radius(tau: complex, sigma: complex, eta: complex,
                     trunc: Truncation = DEFAULT_TRUNC, c_lin: float = np.pi / 2) -> float:
    """Radius R of the integration line mu = eta*x, |x| <= R.

    R solves envelope = tol_abs * 1e-2, plus a 25% safety margin.
    """
    a = _envelope_coeff(tau, sigma, eta)
    return 1.25 * _envelope_radius(a, c_lin, -math.log(trunc.tol_abs * 1e-2))


def _line_nodes(eta: complex, radius: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Equispaced trapezoid on mu = eta*x, x in [-R, R] (the integrand decays
    to ~0 at both ends, so the trapezoid converges spectrally)."""
    x = np.linspace(-radius, radius, n)
    return eta * x, np.full(n, eta * (x[1] - x[0]), dtype=np.complex128)


def apply_U(f, lam: complex, tau: complex, sigma: complex, eta: complex,
            trunc: Truncation = DEFAULT_TRUNC, line_radius: float | None = None) -> EvalResult:
    """(U f)(lam) = int_{eta R} u(lam, mu, tau, sigma, eta) Q(mu, sigma, eta)
    f(-mu) dmu.  f may be scalar or vectorized over a numpy array."""
    lam = complex(lam)
    tr = trunc.scaled()
    if line_radius is None:
        line_radius = heat_line_radius(tau, sigma, eta, tr)
    kern = get_u_kernel(tau, sigma, eta, trunc)
    # nodes beyond the envelope's own negligibility radius contribute below
    # tol by the decay precondition; skip them so an oversized line_radius
    # never forces evaluation of f far outside its useful range
    a_env = _envelope_coeff(tau, sigma, eta)
    x_cut = _envelope_radius(a_env, np.pi / 2, -math.log(tr.tol_abs * 1e-3))

    def total(n: int) -> tuple[complex, float]:
        x = np.linspace(-line_radius, line_radius, n)
        keep = np.abs(x) <= x_cut
        x = x[keep]
        mus = eta * x
        w = np.full(len(x), eta * (2.0 * line_radius / (n - 1)), dtype=np.complex128)
        uv, ue = kern.u_many(np.full(len(x), lam), mus)
        qv = q_weight_arr(mus, sigma, eta, pinch_tol=tr.pinch_tol)
        fv = _eval_vectorized(f, -mus)
        vals = uv * qv * fv
        tail = float(np.sum(np.abs(w[:8] * vals[:8])) + np.sum(np.abs(w[-8:] * vals[-8:])))
        return complex(np.sum(w * vals)), tail + float(np.sum(np.abs(w) * ue * np.abs(qv * fv)))

    n = max(tr.quad_points, int(8 * line_radius))
    coarse, _ = total(n)
    fine, tail = total(2 * n)
    err = abs(fine - coarse) + tail
    return EvalResult(fine, float(err),
                      {"terms_used": 2 * n, "line_radius": line_radius,
                       "converged": err < max(tr.tol_abs, tr.tol_rel * abs(fine))})


def _alpha(z: complex, eta: complex) -> complex:
    return complex(np.exp(-1j * np.pi * z * z / (4.0 * eta)))


def _sqrt_pos(z: complex) -> complex:
    s = complex(np.sqrt(complex(z)))
    return -s if s.real < 0 else s


def apply_T_kappa(f, lam: complex, params: ModularParams,
                  trunc: Truncation = DEFAULT_TRUNC,
                  line_radius: float | None = None) -> EvalResult:
    """The heat operator T_kappa(tau, eta): takes f (a function at nome
    tau - 2 eta kappa) to a function at nome tau,

    (T f)(lam) = -e^{4 pi i eta}/(2 pi sqrt(4 i eta)) alpha(lam)
                 int u(lam, mu, tau, tau - 2 eta kappa, eta) Q(mu) alpha(mu)
                 f(-mu) dmu,
    sqrt taken with positive real part.
    """
    check_regime(params)
    tau, eta, kappa = params.tau, params.eta, params.kappa
    sigma = tau - 2 * eta * kappa
    if sigma.imag <= 0:
        raise RegimeError(f"Im(tau - 2 eta kappa) = {sigma.imag:.3g} must be > 0")

    def g(mu):
        mu = np.asarray(mu, dtype=np.complex128)
        return np.exp(-1j * np.pi * mu * mu / (4.0 * eta)) * _eval_vectorized(f, mu)

    inner = apply_U(g, lam, tau, sigma, eta, trunc, line_radius)
    pref = -np.exp(4j * np.pi * eta) / (2.0 * np.pi * _sqrt_pos(4j * eta)) * _alpha(lam, eta)
    return EvalResult(complex(pref * inner.value), abs(pref) * inner.err_estimate,
                      inner.diagnostics)


def apply_T_bar(f, lam: complex, params: ModularParams, m_range: int = 30,
                trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """Discrete-sum variant of the heat operator on the grid mu = -lam + 2 eta m:

    (T_bar f)(lam) = C alpha(lam) sum_m u(lam, -lam + 2 eta m) Q(-lam + 2 eta m)
                     alpha(lam - 2 eta m) f(lam - 2 eta m),
    C = i e^{4 pi i eta} / (2 pi) / sum_m e^{-pi i eta m^2}.
    """
    check_regime(params)
    tau, eta, kappa = params.tau, params.eta, params.kappa
    sigma = tau - 2 * eta * kappa
    if sigma.imag <= 0:
        raise RegimeError(f"Im(tau - 2 eta kappa) = {sigma.imag:.3g} must be > 0")
    lam = complex(lam)
    tr = trunc.scaled()

    ms = np.arange(-m_range, m_range + 1)
    mus = -lam + 2 * eta * ms.astype(np.complex128)
    kern = get_u_kernel(tau, sigma, eta, trunc)
    uv, ue = kern.u_many(np.full(len(ms), lam), mus)
    try:
        qv = q_weight_arr(mus, sigma, eta, pinch_tol=tr.pinch_tol)
    except PoleError as exc:
        raise PoleError(f"T_bar grid point -lam + 2 eta m hit a pole of Q "
                        f"(lam={lam}): {exc}") from exc
    args = lam - 2 * eta * ms.astype(np.complex128)
    al = np.exp(-1j * np.pi * args * args / (4.0 * eta))
    fv = _eval_vectorized(f, args)

    norm_ms = np.arange(-4 * m_range, 4 * m_range + 1)
    norm = np.sum(np.exp(-1j * np.pi * eta * norm_ms.astype(float) ** 2))
    c = 1j * np.exp(4j * np.pi * eta) / (2.0 * np.pi) / norm

    terms = uv * qv * al * fv
    edge = abs(terms[0]) + abs(terms[-1])
    inner = abs(terms[1]) + abs(terms[-2])
    if edge > max(inner, tr.tol_abs) and edge > 1e-12 * np.max(np.abs(terms)):
        raise RegimeError("T_bar terms not decaying at |m| = m_range; increase m_range")
    val = c * _alpha(lam, eta) * np.sum(terms)
    err = abs(c) * (edge + float(np.sum(ue * np.abs(qv * al * fv))))
    return EvalResult(complex(val), float(err),
                      {"terms_used": len(ms), "converged": err < tr.tol_abs})


def hts_source(idx: HTSIndex, params: ModularParams, trunc: Truncation = DEFAULT_TRUNC,
               perturb: float = 0.0, tilde: bool = False):
    """Vectorized handle for delta_{l,kappa}(., tau - 2 eta kappa, eta), the
    natural input of the heat operator; perturb adds a multiple of the
    level-(kappa+2) theta basis element theta_{0,kappa+2} (a deliberately
    wrong function, for negative controls)."""
    src = ModularParams(tau=params.tau - 2 * params.eta * params.kappa,
                        eta=params.eta, kappa=params.kappa)

    def f(mu):
        mu = np.atleast_1d(np.asarray(mu, dtype=np.complex128))
        if tilde:
            v, _ = delta_tilde_arr(idx, mu, src, trunc)
        else:
            v, _ = delta_arr(idx, mu, src, trunc)
        if perturb:
            v = v + perturb * theta_basis_arr(mu, src.tau, 0, params.kappa + 2)
        return v

    return f


def qkzb_residual(idx: HTSIndex, params: ModularParams, lams,
                  trunc: Truncation = DEFAULT_TRUNC, operator: str = "heat",
                  m_range: int = 30, perturb: float = 0.0,
                  line_radius: float | None = None, tilde: bool = False) -> float:
    """Worst relative defect of the transport identity
    T[delta(., tau - 2 eta kappa)](lam) = delta(lam, tau) over the sample
    lams, using the integral ("heat") or discrete ("discrete") operator."""
    f = hts_source(idx, params, trunc, perturb, tilde)
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
    if tilde:
        target, _ = delta_tilde_arr(idx, lams, params, trunc)
    else:
        target, _ = delta_arr(idx, lams, params, trunc)
    worst = 0.0
    for lam, want in zip(lams, target):
        if operator == "heat":
            got = apply_T_kappa(f, lam, params, trunc, line_radius).value
        elif operator == "discrete":
            got = apply_T_bar(f, lam, params, m_range, trunc).value
        else:
            raise ValueError(f"unknown operator {operator!r}")
        worst = max(worst, abs(got - want) / (1.0 + abs(want) + abs(got)))
    return float(worst)


# --------------------------------------------------- exact q-difference ops


def _frac(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"exact operators need a rational q, got {type(q).__name__}")


def cherednik_w(f: LaurentPoly, q) -> LaurentPoly:
    """(w f)(x) = f(q / x)."""
    return f.substitute(_frac(q), invert=True)


def cherednik_gamma(f: LaurentPoly, q) -> LaurentPoly:
    """(Gamma f)(x) = f(q x)."""
    return f.substitute(_frac(q))


def cherednik_Y(f: LaurentPoly, q) -> LaurentPoly:
    """Y = (q^{-2} - q^2 x^2)/(1 - x^2) Gamma + (q^2 - q^{-2})/(1 - x^2) w.

    The combined numerator vanishes at x = +-1 for every Laurent f, so the
    division by (1 - x^2) is always exact; a nonzero remainder raises
    ConsistencyError.  On the monic orthogonal polynomials P_j every
    symmetric polynomial in Y acts as its value at q^{j+2} (checked exactly
    elsewhere); Y itself is not diagonal on them.
    """
    q = _frac(q)
    q2 = q * q
    num = LaurentPoly({0: 1 / q2, 2: -q2}) * cherednik_gamma(f, q) \
        + (q2 - 1 / q2) * cherednik_w(f, q)
    return num.divide_exact(LaurentPoly({0: 1, 2: -1}))


def cherednik_Y_inv(f: LaurentPoly, q) -> LaurentPoly:
    """Y^{-1} = Gamma^{-1} (q^2 - q^{-2} x^2)/(1 - x^2)
             + w x^2 (q^2 - q^{-2})/(1 - x^2),

    realized over the common denominator (1 - x^2/q^2)(1 - q^2 x^{-2})."""
    q = _frac(q)
    q2 = q * q
    f_down = f.substitute(1 / q)           # f(x/q)
    f_flip = f.substitute(q, invert=True)  # f(q/x)
    num = LaurentPoly({0: q2, 2: -1 / q2**2}) * f_down * LaurentPoly({0: 1, -2: -q2}) \
        + LaurentPoly({-2: q2}) * (q2 - 1 / q2) * f_flip * LaurentPoly({0: 1, 2: -1 / q2})
    den = LaurentPoly({0: 2, 2: -1 / q2, -2: -q2})
    return num.divide_exact(den)


def apply_f_of_Y(f_sym: LaurentPoly, p: LaurentPoly, q) -> LaurentPoly:
    """Apply f(Y) for a symmetric Laurent polynomial f (invariant under
    y -> 1/y), expanding f into powers of Y and Y^{-1}."""
    if not f_sym.is_symmetric():
        raise ValueError("f(Y) is only defined for symmetric f")
    q = _frac(q)
    dmax = f_sym.max_deg
    out = f_sym.coeff(0) * p
    up, down = p, p
    for d in range(1, dmax + 1):
        up = cherednik_Y(up, q)
        down = cherednik_Y_inv(down, q)
        c = f_sym.coeff(d)
        if c != 0:
            out = out + c * (up + down)
    return out


def t_q_pair(p: LaurentPoly, q, m: int) -> LaurentPoly:
    """The (+m, -m) term pair of the trigonometric heat operator applied to p,
    without its overall Gaussian weight (which cancels in every eigenvalue
    check): (Y^m + Y^{-m}) p, or p itself for m = 0.

    Realized through the exact q-difference operator Y, whose symmetric
    combinations diagonalize on the orthogonal polynomials P_j with
    eigenvalue x^m + x^{-m} at x = q^{j+2}; the individual shift terms of the
    trigonometric sum are not separately diagonal, only their Y-resummation
    is (see t_q_trig_sum for the truncated numeric form).
    """
    q = _frac(q)
    if m == 0:
        return p
    up, down = p, p
    for _ in range(m):
        up = cherednik_Y(up, q)
        down = cherednik_Y_inv(down, q)
    return up + down


def t_q_apply(p: LaurentPoly, q, m_range: int, sqrt_q=None) -> list[tuple[int, LaurentPoly]]:
    """All term pairs of the trigonometric heat operator up to m_range.

    Returns [(m, contribution)] for m = 0..m_range.  With sqrt_q given
    (sqrt_q^2 must equal q) each contribution carries its Gaussian weight
    q^{m^2/2} = sqrt_q^{m^2}; otherwise the raw pairs are returned.
    """
    q = _frac(q)
    if sqrt_q is not None:
        sqrt_q = _frac(sqrt_q)
        if sqrt_q * sqrt_q != q:
            raise ConsistencyError(f"sqrt_q^2 = {sqrt_q * sqrt_q} != q = {q}")
    out = []
    for m in range(m_range + 1):
        term = t_q_pair(p, q, m)
        if sqrt_q is not None:
            term = sqrt_q ** (m * m) * term
        out.append((m, term))
    return out


def t_q_trig_sum(p_eval, x: complex, q: complex, m_range: int) -> complex:
    """Truncated numeric trigonometric heat operator at x = e^{pi i lam}:

    sum_{|m| <= m_range} q^{m^2/2} c_m(x) p(q^m x),
    c_m(x) = -(q^{-2}(q^m+q^{-m}) - x^2 q^m - x^{-2} q^{-m})(x q^m - x^{-1} q^{-m})
             / ((q x - (q x)^{-1})(x - x^{-1})(x/q - q x^{-1})).

    On P_j the full sum equals sum_m q^{m^2/2} (q^{j+2})^m * P_j(x); the
    Gaussian weight makes the truncation error O(q^{m_range^2/2}).
    """
    x, q = complex(x), complex(q)
    if abs(q) >= 1:
        raise RegimeError(f"truncated trigonometric sum needs |q| < 1, got |q|={abs(q):.3g}")
    den = (q * x - 1 / (q * x)) * (x - 1 / x) * (x / q - q / x)
    if abs(den) < 1e-13 * (abs(x) + 1 / abs(x)) ** 3:
        raise PoleError(f"shift-operator prefactor evaluated at a zero of its denominator, x={x}")
    total = 0.0 + 0.0j
    for m in range(-m_range, m_range + 1):
        qm = q ** m
        cm = -((qm + 1 / qm) / q**2 - x * x * qm - qm ** -1 / (x * x)) * (x * qm - 1 / (x * qm))
        total += q ** (m * m / 2.0) * cm / den * p_eval(qm * x)
    return complex(total)

"""Degenerations of the hypergeometric theta functions: regularized
conformal-block integrals, the eta -> 0 classical limit, the Gaussian
(Mehta-type) integral identity for the q-orthogonal polynomials, the
truncated difference equation, and the orthogonality pairing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import tanh_sinh_nodes
from .ellint import get_u_kernel, q_weight
from .hts import check_regime, i_regularized
from .laurent import LaurentPoly
from .macdonald import elliptic_macdonald_arr, macdonald_m2
from .operators import t_q_pair, t_q_trig_sum
from .theta import dtheta_arr, theta_arr, theta_basis_arr
from .types import (
    DEFAULT_TRUNC,
    EvalResult,
    HTSIndex,
    ModularParams,
    RegimeError,
    Truncation,
)


@dataclass
class LimitReport:
    """Convergence record of a one-parameter limit."""

    parameter_sequence: list[complex]
    ratio_values: list[complex]
    extrapolated_limit: complex
    convergence_order_estimate: float
    diagnostics: dict = field(default_factory=dict)


# ------------------------------------------------------- conformal blocks


def _block_integral(l: int, kappa: int, lam: complex, tau: complex,
                    trunc: Truncation) -> tuple[complex, float, dict]:
    """F(lam) = int_0^1 (theta(t)/theta'(0))^{-1-2/kappa} [f(t) -
    (f(0)/theta'(0)) e^{2 pi i l t/kappa} (theta'(t) - pi i l theta(t))] dt,
    f(t) = theta(t - lam) theta_{l,kappa}(2t/kappa + lam).

    The subtracted term is a complete differential whose primitive
    e^{2 pi i l t/kappa} theta(t)^{-2/kappa} vanishes at both endpoints in
    the analytic-continuation sense, and the bracket vanishes at t = 0 and
    t = 1, leaving an integrable t^{-2/kappa} endpoint singularity handled
    by tanh-sinh quadrature.  The fractional power is continued along (0,1)
    from the principal determination near t -> 0+; the accumulated argument
    is tracked node to node and reported.
    """
    tr = trunc.scaled()

    def total(n: int) -> tuple[complex, float]:
        t, w = tanh_sinh_nodes(n)
        th = theta_arr(t, tau)
        dth0 = dtheta_arr(np.array([0.0j]), tau)[0]
        wq = th / dth0
        # branch continuous along the ordered nodes; angle tracking is done
        # on nodes where |wq| is resolvable (near the endpoint zeros the
        # computed sign is roundoff noise but the contribution is negligible)
        raw = np.angle(wq)
        good = np.abs(wq) > 1e-12 * np.max(np.abs(wq))
        gi = np.flatnonzero(good)
        ga = raw[gi]
        ga = ga[0] + np.concatenate(
            ([0.0], np.cumsum(np.mod(np.diff(ga) + np.pi, 2.0 * np.pi) - np.pi)))
        ang = np.interp(np.arange(len(wq)), gi, ga)
        power = np.exp((-1.0 - 2.0 / kappa) * (np.log(np.abs(wq)) + 1j * ang))
        f = theta_arr(t - lam, tau) * theta_basis_arr(2.0 * t / kappa + lam, tau, l, kappa)
        f0 = theta_arr(np.array([-lam]), tau)[0] \
            * theta_basis_arr(np.array([lam]), tau, l, kappa)[0]
        cterm = (f0 / dth0) * np.exp(2j * np.pi * l * t / kappa) \
            * (dtheta_arr(t, tau) - 1j * np.pi * l * th)
        winding = float(np.max(np.abs(ang - ang[0])))
        return complex(np.sum(w * power * (f - cterm))), winding

    n = max(2 * tr.quad_points, 192)
    coarse, _ = total(n)
    fine, winding = total(2 * n)
    err = abs(fine - coarse)
    return fine, err, {"winding": winding, "branch_flag": winding > 0.9 * np.pi}


def conformal_block(l: int, kappa: int, lam: complex, tau: complex,
                    trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """v_{l,kappa}(lam, tau) = (F(lam) - F(-lam)) / theta(lam, tau) with the
    regularized endpoint integral F.

    The lam -> -lam reflection acts on the integrand only, not on the
    1/theta(lam) prefactor, so v is even in lam; this is the combination
    that the Gaussian series for delta degenerates to (delta is odd and
    theta is odd, so their ratio is even)."""
    if tau.imag <= 0:
        raise RegimeError(f"needs Im tau > 0, got {tau}")
    lam = complex(lam)
    th = theta_arr(np.array([lam]), tau)[0]
    if abs(th) < 1e-12:
        raise RegimeError(f"lam={lam} is at a zero of theta(., tau)")
    fp, ep, dp = _block_integral(l, kappa, lam, tau, trunc)
    fm, em, dm = _block_integral(l, kappa, -lam, tau, trunc)
    v = (fp - fm) / th
    return EvalResult(complex(v), float((ep + em) / abs(th)),
                      {"winding": max(dp["winding"], dm["winding"]),
                       "branch_flag": dp["branch_flag"] or dm["branch_flag"]})


# -------------------------------------------------------- classical limit


def classical_rhs_const(l: int, kappa: int, tau: complex,
                        product_terms: int = 200) -> complex:
    """-(pi/kappa) sin(2 pi/kappa) / (sin(pi(l+1)/kappa) sin(pi(l-1)/kappa)) *
    (2 pi)^{-2/kappa} e^{-pi i l/kappa} prod_{j>=1}(1 - e^{2 pi i j tau})^{-4/kappa}
    / theta'(0, tau), principal branches.

    Obtained termwise from the Gaussian series: the weight Q(2 eta j,
    -2 eta kappa, eta) degenerates to the sine ratio (contributing 1/(2 eta)
    and 1/kappa), the phase function's small-eta limit contributes
    (2 pi)^{-2/kappa} prod^{-4/kappa} e^{-pi i j/kappa} (constant on the
    congruence class j = l mod 2 kappa), and resumming the class against the
    Gaussian reproduces theta_{l,kappa}(2t/kappa - lam) inside the block
    integral, whose integrand carries 1/theta'(0) relative to F."""
    js = np.arange(1, product_terms + 1)
    prod = np.exp(np.sum((-4.0 / kappa) * np.log1p(-np.exp(2j * np.pi * js * tau))))
    dth0 = complex(dtheta_arr(np.array([0.0j]), tau)[0])
    pref = -(np.pi / kappa) * math.sin(2.0 * np.pi / kappa) \
        / (math.sin(np.pi * (l + 1) / kappa) * math.sin(np.pi * (l - 1) / kappa)) \
        * (2.0 * np.pi) ** (-2.0 / kappa) * np.exp(-1j * np.pi * l / kappa)
    return complex(pref * prod / dth0)


def _trunc_for_eta(eta: complex, trunc: Truncation, kappa: int) -> Truncation:
    """Product/quadrature truncations adequate for small |eta| (the sigma
    nome |e^{2 pi i sigma}| = e^{-4 pi kappa |Im eta|} approaches 1)."""
    a = max(abs(eta.imag), 1e-6)
    cutoff = max(trunc.product_cutoff, int(37.0 / (4.0 * np.pi * kappa * a)) + 24)
    quad = max(trunc.quad_points, int(64 + 0.7 / a))
    return Truncation(product_cutoff=cutoff, series_cutoff=trunc.series_cutoff,
                      quad_points=quad, line_radius=trunc.line_radius,
                      tol_abs=trunc.tol_abs, tol_rel=trunc.tol_rel,
                      pinch_tol=trunc.pinch_tol)


def delta_regularized(idx: HTSIndex, lam: complex, params: ModularParams,
                      trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """delta_{l,kappa} through the pole-subtracted integral, stable down to
    small |eta|: e^{2 pi i eta l^2/kappa} Q(2 eta l, -2 eta kappa, eta) *
    (I_reg(lam) - I_reg(-lam))."""
    tr = _trunc_for_eta(params.eta, trunc, params.kappa)
    ip = i_regularized(idx, lam, params, tr)
    im = i_regularized(idx, -lam, params, tr)
    pref = np.exp(2j * np.pi * params.eta * idx.l * idx.l / params.kappa) \
        * complex(q_weight(2 * params.eta * idx.l, params.sigma, params.eta, tr))
    v = pref * (ip.value - im.value)
    return EvalResult(complex(v), abs(pref) * (ip.err_estimate + im.err_estimate),
                      {"terms_used": ip.diagnostics.get("terms_used")})


def classical_limit_check(l: int, kappa: int, lam: complex, tau: complex,
                          eta_sequence, trunc: Truncation = DEFAULT_TRUNC) -> LimitReport:
    """Ratios of 2 eta delta_{l,kappa}(lam, tau, eta) / theta(lam, tau) to
    the stated eta -> 0 limit (constant times the conformal block); the
    ratios should approach 1 along eta_sequence -> 0."""
    etas = [complex(e) for e in eta_sequence]
    if not all(abs(etas[i + 1]) < abs(etas[i]) for i in range(len(etas) - 1)):
        raise ValueError("eta_sequence must decrease in magnitude")
    idx = HTSIndex(l, kappa)
    th = theta_arr(np.array([complex(lam)]), tau)[0]
    vb = conformal_block(l, kappa, lam, tau, trunc)
    target = classical_rhs_const(l, kappa, tau) * vb.value
    ratios = []
    for eta in etas:
        params = ModularParams(tau=tau, eta=eta, kappa=kappa)
        check_regime(params)
        d = delta_regularized(idx, lam, params, trunc)
        ratios.append(complex(2.0 * eta * d.value / th / target))
    if len(ratios) >= 3:
        h = [abs(e) for e in etas[-3:]]
        d1, d2 = abs(ratios[-2] - ratios[-3]), abs(ratios[-1] - ratios[-2])
        order = math.log(d1 / d2) / math.log(h[0] / h[1]) if d2 > 0 and h[0] != h[1] else float("nan")
    else:
        order = float("nan")
    if len(ratios) >= 2:
        h1, h2 = abs(etas[-2]), abs(etas[-1])
        extrap = ratios[-1] + (ratios[-1] - ratios[-2]) * h2 / (h1 - h2)
    else:
        extrap = ratios[-1]
    return LimitReport(parameter_sequence=etas, ratio_values=ratios,
                       extrapolated_limit=complex(extrap),
                       convergence_order_estimate=float(order),
                       diagnostics={"block": vb.value, "block_err": vb.err_estimate,
                                    "target": target})


# --------------------------------------------------------- Mehta identity


def mehta_check(j: int, eta: complex, lam: complex = 0.3,
                n_nodes: int = 4001, line_radius: float = 50.0,
                trunc: Truncation = DEFAULT_TRUNC) -> float:
    """Relative residual of the Gaussian integral identity

    q^{-(j+2)^2/2} P_j(e^{pi i lam}, q) = int_{eta R} V(lam, mu)
    P_j(e^{-pi i mu}, q) dmu,
    V = e^{-i pi (lam+mu)^2/4 eta} / (2 i sqrt(4 i eta)) *
        (q^{-2} cos pi(lam+mu) - cos pi(lam-mu)) sin(pi mu) /
        (sin pi(lam-2 eta) sin pi(lam) sin pi(lam+2 eta)),
    q = e^{-2 pi i eta}, sqrt with positive real part.
    """
    if eta.imag >= 0:
        raise RegimeError(f"needs Im eta < 0 for Gaussian decay, got eta={eta}")
    lam = complex(lam)
    q = complex(np.exp(-2j * np.pi * eta))
    # offset keeps the grid off the removable zeros of the closed form
    x = np.linspace(-line_radius + 1.3e-3, line_radius + 1.3e-3, n_nodes)
    mu = eta * x
    w = eta * (x[1] - x[0])
    s = complex(np.sqrt(4j * eta))
    s = -s if s.real < 0 else s
    den = (np.sin(np.pi * (lam - 2 * eta)) * np.sin(np.pi * lam)
           * np.sin(np.pi * (lam + 2 * eta)))
    if abs(den) < 1e-10:
        raise RegimeError(f"lam={lam} is at a zero of the kernel denominator")
    gauss = np.exp(-1j * np.pi * (lam + mu) ** 2 / (4.0 * eta))
    trig = q ** -2 * np.cos(np.pi * (lam + mu)) - np.cos(np.pi * (lam - mu))
    V = gauss / (2j * s) * trig * np.sin(np.pi * mu) / den

    def p_eval(xs: np.ndarray) -> np.ndarray:
        if j == 0:
            return np.ones_like(xs)
        a = (q ** (j + 3) - q ** (-j - 3)) / (q ** (j + 1) - q ** (-j - 1))
        num = xs ** (j + 3) - a * xs ** (j + 1) + a * xs ** (-j - 1) - xs ** (-j - 3)
        dd = (q * xs - 1.0 / (q * xs)) * (xs - 1.0 / xs) * (xs / q - q / xs)
        return num / dd

    rhs = complex(np.sum(w * V * p_eval(np.exp(-1j * np.pi * mu))))
    lhs = q ** (-(j + 2) ** 2 / 2.0) * complex(p_eval(np.array([np.exp(1j * np.pi * lam)]))[0])
    return float(abs(lhs - rhs) / abs(lhs))


# ----------------------------------------------------- difference equation


def diff_eqn_check(j: int, q, m_range: int, x_sample: complex = 0.8 + 0.3j) -> dict:
    """Termwise and truncated checks of the difference-operator eigenvalue
    identity on P_j.

    Termwise (exact, rational q): each (+m,-m) resummed pair applied to P_j
    equals (q^{(j+2)m} + q^{-(j+2)m}) P_j exactly.  Truncated (numeric): the
    shift-operator sum over |m| <= m_range at x_sample against the
    eigenvalue sum with the same truncation.
    """
    qF = Fraction(q) if not isinstance(q, Fraction) else q
    P = macdonald_m2(j, qF)
    termwise: dict[int, bool] = {}
    for m in range(m_range + 1):
        want = P if m == 0 else (qF ** ((j + 2) * m) + qF ** (-(j + 2) * m)) * P
        termwise[m] = t_q_pair(P, qF, m) == want
    qn = float(qF)
    report: dict = {"termwise_exact": termwise, "all_termwise": all(termwise.values())}
    if 0 < qn < 1:
        pe = lambda xs: complex(P(complex(xs)))
        lhs = t_q_trig_sum(pe, x_sample, qn, m_range)
        rhs = sum(qn ** (m * m / 2.0) * qn ** ((j + 2) * m)
                  for m in range(-m_range, m_range + 1)) * pe(x_sample)
        report["truncated_lhs"] = lhs
        report["truncated_rhs"] = complex(rhs)
        report["truncated_residual"] = abs(lhs - rhs) / (1.0 + abs(rhs))
    return report


# ----------------------------------------------------------- orthogonality


def orthogonality_check(l: int, j: int, kappa: int, params: ModularParams,
                        trunc: Truncation = DEFAULT_TRUNC, n_nodes: int = 256) -> EvalResult:
    """The pairing -1/(8 pi^2) * 2 * (constant Fourier coefficient of
    u(-mu, 2 eta l, tau, -2 eta kappa, -eta) P_{j-2,kappa}(e^{pi i mu})
    theta(mu, tau)) against its expected value
    delta_{l,j} e^{3 pi i tau/4} / (theta(4 eta, tau) theta'(0, tau)).

    Here P is the theta-ratio polynomial evaluator, so this check is
    independent of the delta-based Gram construction; the expected value is
    the Gram diagonal e^{pi i (4 eta + tau) j^2 / 2 kappa} carried through
    the P normalization factors.
    """
    check_regime(params)
    if not (2 <= l <= kappa - 2 and 2 <= j <= kappa - 2):
        raise ValueError(f"need 2 <= l, j <= kappa-2, got l={l}, j={j}")
    tau, eta, sigma = params.tau, params.eta, params.sigma
    offset = 3.0 * abs(eta.imag)
    kern = get_u_kernel(tau, sigma, -eta, trunc)

    def pairing(n: int) -> complex:
        mus = 1j * offset + 2.0 * np.arange(n) / n
        uv, _ = kern.u_many(-mus, np.full(n, 2 * eta * l, dtype=np.complex128))
        pv = elliptic_macdonald_arr(j - 2, kappa, mus, params, trunc)
        th = theta_arr(mus, tau)
        return -1.0 / (8.0 * np.pi ** 2) * 2.0 * complex(np.mean(uv * pv * th))

    coarse = pairing(n_nodes // 2)
    value = pairing(n_nodes)
    th4 = theta_arr(np.array([4 * eta]), tau)[0]
    dth0 = dtheta_arr(np.array([0.0j]), tau)[0]
    expected = (np.exp(0.75j * np.pi * tau) / (th4 * dth0)) if l == j else 0.0j
    return EvalResult(complex(value), float(abs(value - coarse)),
                      {"expected": complex(expected), "l": l, "j": j,
                       "matches": abs(value - expected) < 1e-5})

"""Hypergeometric theta functions built from the elliptic integral u.

delta_tilde is defined by a Gaussian-weighted series of u values over one
congruence class j = l mod 2*kappa; delta is its odd part.  The same
function has an integral representation (a single contour integral against
the level-kappa theta basis) and a regularized variant of that integral
whose integrand stays finite when the cycle gets pinched at small eta.
The inversion relation pairs delta against u at mirrored eta and yields a
diagonal Gram matrix, computed here by a Fourier-coefficient trapezoid.

Regime for all of this: Im tau > 0, Im eta < 0, and j*tau + 4*eta never an
integer for j >= 1.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Contour, contour_nodes
from .ellint import _omega_arr, get_u_kernel, q_weight, q_weight_arr
from .theta import theta_arr, theta_basis_arr
from .types import (
    DEFAULT_TRUNC,
    DivergenceError,
    EvalResult,
    HTSIndex,
    ModularParams,
    PoleError,
    RegimeError,
    Truncation,
)

TWO_PI_I = 2j * np.pi


def is_admissible(l: int, kappa: int) -> bool:
    """True iff the weight function has no pole on the series support."""
    return l % kappa not in (1, kappa - 1)


def reduced_index(idx: HTSIndex) -> int:
    """The representative of l mod 2*kappa in (-kappa, kappa]."""
    return idx.l if idx.l <= idx.kappa else idx.l - 2 * idx.kappa


def check_regime(params: ModularParams, tol: float = 1e-9) -> None:
    """Raise RegimeError unless Im eta < 0 and j*tau + 4*eta is never an
    integer for j >= 1 (only finitely many j can come close)."""
    tau, eta = params.tau, params.eta
    if eta.imag >= 0:
        raise RegimeError(f"hypergeometric theta functions need Im eta < 0, got eta={eta}")
    jmax = 1 + math.ceil(4 * abs(eta) / tau.imag) + 5
    for j in range(1, jmax + 1):
        z = j * tau + 4 * eta
        if abs(z.imag) < tol and abs(z.real - round(z.real)) < tol:
            raise RegimeError(f"{j}*tau + 4*eta = {z} is within {tol} of an integer")


# ------------------------------------------------------------------- series


def _series_many(idx: HTSIndex, lams: np.ndarray, params: ModularParams,
                 trunc: Truncation) -> tuple[np.ndarray, np.ndarray, dict]:
    """The Gaussian series for delta_tilde at an array of lambda values."""
    check_regime(params)
    if not idx.admissible:
        raise PoleError(f"l={idx.l} is not admissible mod kappa={idx.kappa}; "
                        "the weight function has a pole on the series support")
    tau, eta, kappa, sigma = params.tau, params.eta, params.kappa, params.sigma
    lr = reduced_index(idx)
    tr = trunc.scaled()

    # Two equivalent Gaussian weightings exist, with nomes tau + 4*eta and
    # tau - 4*eta; pick the one decaying faster.
    use_plus = (tau + 4 * eta).imag >= (tau - 4 * eta).imag
    tau_eff = tau + 4 * eta if use_plus else tau - 4 * eta
    if tau_eff.imag <= 0:
        raise DivergenceError(
            f"both Gaussian series weightings diverge: Im(tau+4*eta)={ (tau+4*eta).imag:.3g}, "
            f"Im(tau-4*eta)={(tau-4*eta).imag:.3g}")

    kern = get_u_kernel(tau, sigma, eta, trunc)
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
    p = len(lams)

    m_cap = max(4, tr.series_cutoff // (2 * kappa) + 2)
    m_half = 2
    while True:
        js = lr + 2 * kappa * np.arange(-m_half, m_half + 1)
        mus = 2 * eta * js.astype(np.complex128)
        uv, ue = kern.u_many(np.repeat(lams, len(js)), np.tile(mus, p))
        uv = uv.reshape(p, len(js))
        ue = ue.reshape(p, len(js))
        gauss = np.exp(1j * np.pi * tau_eff * js.astype(float) ** 2 / (2 * kappa))
        if use_plus:
            w = q_weight_arr(mus, sigma, eta, pinch_tol=tr.pinch_tol) * gauss
            pref = 1.0 + 0.0j
        else:
            w = gauss
            pref = np.exp(4j * np.pi * eta * lr * lr / kappa) * complex(q_weight(2 * eta * lr, sigma, eta, trunc))
        terms = uv * w[None, :]
        tmax = np.max(np.abs(terms), axis=1) + 1e-300
        edge = np.abs(terms[:, 0]) + np.abs(terms[:, -1])
        inner = np.abs(terms[:, 1]) + np.abs(terms[:, -2])
        if np.all(edge <= np.maximum(tr.tol_abs, 1e-13 * tmax)):
            break
        if m_half >= m_cap:
            if np.any(edge > inner):
                raise DivergenceError(
                    "Gaussian series terms not decaying at the truncation boundary")
            break
        m_half = min(m_cap, 2 * m_half)

    vals = pref * terms.sum(axis=1)
    errs = np.abs(pref) * ((ue * np.abs(w)[None, :]).sum(axis=1) + edge)
    diag = {"terms_used": len(js), "series_form": "tau+4eta" if use_plus else "tau-4eta",
            "converged": bool(np.all(errs < np.maximum(tr.tol_abs, tr.tol_rel * np.abs(vals))))}
    return vals, errs, diag


# ----------------------------------------------------------------- integral


def _integral_many(idx: HTSIndex, lams: np.ndarray, params: ModularParams,
                   trunc: Truncation) -> tuple[np.ndarray, np.ndarray, dict]:
    """Contour-integral representation of delta_tilde (single integral of the
    u integrand against the level-kappa theta basis)."""
    check_regime(params)
    tau, eta, kappa, sigma = params.tau, params.eta, params.kappa, params.sigma
    lr = reduced_index(idx)
    kern = get_u_kernel(tau, sigma, eta, trunc)
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))

    def half(t: np.ndarray, w: np.ndarray, k: np.ndarray) -> np.ndarray:
        base = w * k * theta_arr(2 * eta * lr + t, sigma) * np.exp(-TWO_PI_I * lr * t / kappa)
        thl = theta_arr((lams[:, None] + t[None, :]).ravel(), tau).reshape(len(lams), len(t))
        zb = (2.0 * t[None, :] / kappa - lams[:, None]).ravel()
        thb = theta_basis_arr(zb, tau, lr, kappa).reshape(len(lams), len(t))
        return (base[None, :] * thl * thb).sum(axis=1)

    coarse = half(kern._t1, kern._w1, kern._k1)
    fine = half(kern._t2, kern._w2, kern._k2)
    scale = np.abs(fine) + np.max(np.abs(fine)) * 1e-3 + 1e-300
    ierr = np.abs(fine - coarse) + kern._k_rel * scale

    pref = np.exp(2j * np.pi * eta * lr * lr / kappa)
    qw = q_weight(2 * eta * lr, sigma, eta, trunc)
    vals = pref * complex(qw) * fine
    errs = abs(pref) * (abs(complex(qw)) * ierr + qw.err_estimate * np.abs(fine))
    return vals, errs, {"terms_used": len(kern._t2), "converged": True}


def i_integral(idx: HTSIndex, lam: complex, params: ModularParams,
               trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """The bare contour integral (no weight/Gaussian prefactor)."""
    vals, errs, diag = _integral_many(idx, np.array([complex(lam)]), params, trunc)
    lr = reduced_index(idx)
    pref = np.exp(2j * np.pi * params.eta * lr * lr / params.kappa) \
        * complex(q_weight(2 * params.eta * lr, params.sigma, params.eta, trunc))
    return EvalResult(complex(vals[0] / pref), float(errs[0] / abs(pref)), diag)


# -------------------------------------------------------- regularized integral


def i_regularized(idx: HTSIndex, lam: complex, params: ModularParams,
                  trunc: Truncation = DEFAULT_TRUNC,
                  residue_correction: bool = True) -> EvalResult:
    """The contour integral with its near-pinch pole subtracted.

    The integrand is G(t) * [g(t) - c * e^{2 pi i l t / kappa} *
    (e^{-4 pi i l eta} theta(t+2 eta, tau) - theta(t-2 eta, tau))] on the
    segment shifted by 4*eta, where G collects the double product, the
    sigma-theta factors and e^{-2 pi i l t / kappa}, and g(t) =
    theta(lam+t, tau) theta_{l,kappa}(2t/kappa - lam, tau).  The constant c
    is fixed by requiring the bracket to vanish at t = 2*eta, which removes
    the pole that would otherwise pinch the shifted cycle as eta -> 0.

    Shifting the cycle down by 4*eta moves it past the pole family at
    -2*eta + Z (the cycle of the unregularized integral passes above it),
    so the crossed residue is added back: the value returned is the shifted
    integral minus 2 pi i times the residue at -2*eta, which reproduces the
    unregularized integral exactly.
    """
    check_regime(params)
    tau, eta, kappa, sigma = params.tau, params.eta, params.kappa, params.sigma
    lr = reduced_index(idx)
    lam = complex(lam)
    tr = trunc.scaled()

    def g_of(t: np.ndarray) -> np.ndarray:
        return theta_arr(lam + t, tau) * theta_basis_arr(2.0 * t / kappa - lam, tau, lr, kappa)

    g2 = g_of(np.array([2 * eta]))[0]
    th4 = theta_arr(np.array([4 * eta]), tau)[0]
    c = g2 / (np.exp(4j * np.pi * lr * eta / kappa) * np.exp(-4j * np.pi * lr * eta) * th4)

    refine = []
    for base in (2 * eta, -2 * eta):
        for n in (0, 1):
            refine.append(base + n)
    contour = Contour.shifted_segment(4 * eta, refine_near=refine)

    def integrand(t: np.ndarray, cutoff: int) -> np.ndarray:
        om = _omega_arr(t, tau, sigma, eta, cutoff)
        th_t = theta_arr(t - 2 * eta, tau)
        th_s = theta_arr(t - 2 * eta, sigma)
        gvec = g_of(t)
        sub = c * np.exp(TWO_PI_I * lr * t / kappa) * (
            np.exp(-4j * np.pi * lr * eta) * theta_arr(t + 2 * eta, tau) - th_t)
        G = om * theta_arr(2 * eta * lr + t, sigma) * np.exp(-TWO_PI_I * lr * t / kappa) \
            / (th_t * th_s)
        return G * (gvec - sub)

    t1, w1 = contour_nodes(contour, tr.quad_points)
    t2, w2 = contour_nodes(contour, 2 * tr.quad_points)
    n = tr.product_cutoff
    coarse = np.sum(w1 * integrand(t1, n))
    v2 = integrand(t2, n)
    fine = np.sum(w2 * v2)
    v2_lo = integrand(t2, max(4, n - 6))
    trunc_err = float(np.sum(np.abs(w2) * np.abs(v2 - v2_lo)))

    # residue crossed when shifting the cycle below -2*eta (spectrally
    # accurate trapezoid on a small circle around the simple pole)
    r = min(0.02, abs(4 * eta) / 3.0)
    n_res = 64
    th = 2 * np.pi * (np.arange(n_res) + 0.5) / n_res
    z = -2 * eta + r * np.exp(1j * th)
    res = np.sum(integrand(z, n) * r * np.exp(1j * th)) / n_res
    value = fine - 2j * np.pi * res if residue_correction else fine

    err = abs(fine - coarse) + trunc_err + 1e-14 * (abs(fine) + abs(2j * np.pi * res))
    return EvalResult(complex(value), float(err),
                      {"terms_used": len(t2), "converged": err < max(tr.tol_abs, tr.tol_rel * abs(value))})


# ----------------------------------------------------------- the functions


def delta_tilde_arr(idx: HTSIndex, lams, params: ModularParams,
                    trunc: Truncation = DEFAULT_TRUNC,
                    method: str = "series") -> tuple[np.ndarray, np.ndarray]:
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
    if method == "series":
        vals, errs, _ = _series_many(idx, lams, params, trunc)
    elif method == "integral":
        vals, errs, _ = _integral_many(idx, lams, params, trunc)
    else:
        raise ValueError(f"unknown method {method!r}")
    return vals, errs


def delta_tilde(idx: HTSIndex, lam: complex, params: ModularParams,
                trunc: Truncation = DEFAULT_TRUNC, method: str = "series") -> EvalResult:
    """One hypergeometric theta summand (not yet antisymmetrized in lambda)."""
    fn = _series_many if method == "series" else _integral_many
    if method not in ("series", "integral"):
        raise ValueError(f"unknown method {method!r}")
    vals, errs, diag = fn(idx, np.array([complex(lam)]), params, trunc)
    return EvalResult(complex(vals[0]), float(errs[0]), diag)


def delta_arr(idx: HTSIndex, lams, params: ModularParams,
              trunc: Truncation = DEFAULT_TRUNC,
              method: str = "series") -> tuple[np.ndarray, np.ndarray]:
    """The odd combination delta(lam) = delta_tilde(lam) - delta_tilde(-lam)."""
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
    both = np.concatenate([lams, -lams])
    vals, errs = delta_tilde_arr(idx, both, params, trunc, method)
    p = len(lams)
    return vals[:p] - vals[p:], errs[:p] + errs[p:]


def delta(idx: HTSIndex, lam: complex, params: ModularParams,
          trunc: Truncation = DEFAULT_TRUNC, method: str = "series") -> EvalResult:
    vals, errs = delta_arr(idx, [complex(lam)], params, trunc, method)
    return EvalResult(complex(vals[0]), float(errs[0]), {"converged": True})


def hts_handle(idx: HTSIndex, params: ModularParams,
               trunc: Truncation = DEFAULT_TRUNC, tilde: bool = False):
    """A scalar callable lam -> delta(lam) (or delta_tilde) for residual checks."""
    if tilde:
        return lambda lam: complex(delta_tilde(idx, lam, params, trunc).value)
    return lambda lam: complex(delta(idx, lam, params, trunc).value)


# ------------------------------------------------------------ inversion Gram


def gram_inversion(params: ModularParams, trunc: Truncation = DEFAULT_TRUNC,
                   n_nodes: int = 256) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Gram matrix of the inversion pairing between u at mirrored eta and delta.

    Entry (l, j) is -1/(8 pi^2) * int_0^2 u(-mu, 2 eta l, tau, -2 eta kappa,
    -eta) delta_j(mu) Q(mu, tau, eta) dmu along Im mu = 3 |Im eta|, computed as
    twice the mean of the 2-periodic integrand (equispaced trapezoid).  The
    eta-independent prefactor -1/(8 pi^2) is what makes the diagonal equal to
    exp(pi i (4 eta + tau) j^2 / 2 kappa); it was fixed numerically across
    several parameter points.  Returns (gram, expected_diagonal, indices) for
    l, j in 2..kappa-2.
    """
    check_regime(params)
    tau, eta, kappa, sigma = params.tau, params.eta, params.kappa, params.sigma
    ls = list(range(2, kappa - 1))
    if not ls:
        raise ValueError(f"no interior indices for kappa={kappa}")
    offset = 3.0 * abs(eta.imag)
    mus = 1j * offset + 2.0 * np.arange(n_nodes) / n_nodes

    qv = q_weight_arr(mus, tau, eta, pinch_tol=trunc.scaled().pinch_tol)
    kern_u = get_u_kernel(tau, sigma, -eta, trunc)

    dvals = {}
    for j in ls:
        dv, _ = delta_arr(HTSIndex(j, kappa), mus, params, trunc)
        dvals[j] = dv
    gram = np.empty((len(ls), len(ls)), dtype=np.complex128)
    for a, l in enumerate(ls):
        uv, _ = kern_u.u_many(-mus, np.full(n_nodes, 2 * eta * l, dtype=np.complex128))
        for b, j in enumerate(ls):
            total = np.sum(uv * dvals[j] * qv) * (2.0 / n_nodes)
            gram[a, b] = -total / (8 * np.pi ** 2)
    js = np.array(ls, dtype=float)
    expected = np.exp(1j * np.pi * (4 * eta + tau) * js ** 2 / (2 * kappa))
    return gram, expected, ls

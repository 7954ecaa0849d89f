"""The elliptic hypergeometric integral u, its weight function Q, the
double-product kernel, and the trigonometric degenerations of u.

The integrand of u has two families of simple poles: 2*eta + l + m*tau +
n*sigma (must stay above the integration cycle) and the negatives of those
points (must stay below), l in Z, m, n >= 0.  For Im eta > 0 the straight
cycle [0,1] already separates them; otherwise the cycle is deformed, which
build_u_contour encodes as indentations (semicircular arcs for poles on the
axis, residue loops for poles that crossed it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Contour, Indent, contour_nodes
from .theta import dtheta_arr, theta_arr
from .types import (
    DEFAULT_TRUNC,
    EvalResult,
    PoleError,
    RegimeError,
    Truncation,
    _trunc_scale,
)

TWO_PI_I = 2j * np.pi


# ------------------------------------------------------------------ kernel


def _omega_arr(t: np.ndarray, tau: complex, sigma: complex, eta: complex,
               cutoff: int) -> np.ndarray:
    return _kernels.omega_grid(np.asarray(t, dtype=np.complex128).ravel(),
                               complex(tau), complex(sigma), complex(eta),
                               int(cutoff), int(cutoff))


def _omega_pinch_check(t: complex, tau: complex, sigma: complex, eta: complex,
                       pinch_tol: float) -> None:
    for j in range(4):
        for k in range(4):
            d1 = 1.0 - np.exp(TWO_PI_I * (t + 2 * eta + j * tau + k * sigma))
            d2 = 1.0 - np.exp(TWO_PI_I * (-t + 2 * eta + (j + 1) * tau + (k + 1) * sigma))
            if min(abs(d1), abs(d2)) < pinch_tol:
                raise PoleError(f"double-product denominator ~0 at t={t}, (j,k)=({j},{k})")


def omega(t: complex, tau: complex, sigma: complex, eta: complex,
          trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """The double product Omega_{2 eta}(t, tau, sigma) over j,k >= 0."""
    if tau.imag <= 0 or sigma.imag <= 0:
        raise RegimeError(f"Omega needs Im tau > 0 and Im sigma > 0, got tau={tau}, sigma={sigma}")
    trunc = trunc.scaled()
    _omega_pinch_check(complex(t), tau, sigma, eta, trunc.pinch_tol)
    tt = np.array([complex(t)])
    n = trunc.product_cutoff
    v_full = _omega_arr(tt, tau, sigma, eta, n)[0]
    v_half = _omega_arr(tt, tau, sigma, eta, max(4, n - 6))[0]
    err = abs(v_full - v_half) + 1e-15 * abs(v_full)
    return EvalResult(complex(v_full), float(err),
                      {"terms_used": (n + 1) ** 2, "converged": err < trunc.tol_abs})


def q_weight(mu: complex, sigma: complex, eta: complex,
             trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """Q(mu, sigma, eta) = theta(4 eta) theta'(0) / (theta(mu-2 eta) theta(mu+2 eta)),
    all at nome sigma."""
    trunc = trunc.scaled()
    z = np.array([4 * eta, mu - 2 * eta, mu + 2 * eta], dtype=np.complex128)
    th = theta_arr(z, sigma)
    dth0 = dtheta_arr(np.array([0.0 + 0.0j]), sigma)[0]
    scale = abs(dth0)
    if min(abs(th[1]), abs(th[2])) < trunc.pinch_tol * scale:
        raise PoleError(f"Q(mu) evaluated within pinch_tol of a pole, mu={mu}")
    val = th[0] * dth0 / (th[1] * th[2])
    return EvalResult(complex(val), 1e-14 * abs(val) + 1e-15, {"converged": True})


def q_weight_arr(mu: np.ndarray, sigma: complex, eta: complex,
                 pinch_tol: float = 1e-9) -> np.ndarray:
    """Vectorized Q over an array of mu (values only)."""
    mu = np.asarray(mu, dtype=np.complex128).ravel()
    num = theta_arr(np.array([4 * eta]), sigma)[0] * dtheta_arr(np.array([0.0j]), sigma)[0]
    den = theta_arr(mu - 2 * eta, sigma) * theta_arr(mu + 2 * eta, sigma)
    scale = abs(num)
    if np.min(np.abs(den)) < pinch_tol * scale:
        raise PoleError("Q array evaluation hit a pole of the weight function")
    return num / den


def pole_pinch_distance(tau: complex, sigma: complex, eta: complex,
                        order: int = 3) -> float:
    """min |4 eta + l + m tau + n sigma| over l in Z, 0 <= m, n <= order.

    u has (at most simple) poles exactly on the zero set of these affine
    forms, where a pole of each integrand family pinches the cycle.
    """
    span = abs((4 * eta).real) + order * (abs(tau.real) + abs(sigma.real)) + 1.0
    lmax = int(math.ceil(span)) + 1
    best = math.inf
    for m in range(order + 1):
        for n in range(order + 1):
            base = 4 * eta + m * tau + n * sigma
            l0 = -round(base.real)
            for l in range(l0 - lmax, l0 + lmax + 1):
                best = min(best, abs(base + l))
    return float(best)


# ----------------------------------------------------------------- contour


def _dist_mod1(x: float, y: float) -> float:
    d = (x - y) % 1.0
    return min(d, 1.0 - d)


def _lattice_min(gens: tuple[complex, ...], order: int = 3) -> float:
    """min |l + m*g1 + n*g2| over (l, m, n) != 0, m, n >= 0, small."""
    best = 1.0  # the l-direction spacing
    pts = [0.0 + 0.0j]
    if len(gens) == 1:
        pts = [m * gens[0] for m in range(order + 1)]
    elif len(gens) == 2:
        pts = [m * gens[0] + n * gens[1] for m in range(order + 1) for n in range(order + 1)]
    for p in pts:
        if p == 0:
            continue
        fr = p.real % 1.0
        best = min(best, math.hypot(min(fr, 1.0 - fr), p.imag))
    return best


def build_u_contour(tau: complex, sigma: complex, eta: complex,
                    trunc: Truncation = DEFAULT_TRUNC,
                    lattice: tuple[complex, ...] | None = None) -> Contour:
    """Integration cycle for u: a unit segment with the principal pole of
    each family indented to the correct side.

    lattice is the tuple of quasi-period directions generating the higher
    members of each pole family (default (tau, sigma); (sigma,) for the
    semi-trigonometric degeneration).  Non-principal family members must
    already lie safely on their required side, else RegimeError.
    """
    trunc = trunc.scaled()
    gens = (tau, sigma) if lattice is None else tuple(lattice)
    d_pinch = _pinch_for(gens, eta)
    # simple poles degrade quadrature well before exact coincidence
    pinch_tol = trunc.pinch_tol * max(1.0, *(abs(g) for g in gens))
    if d_pinch < pinch_tol:
        raise PoleError(f"pole families pinch the cycle (distance {d_pinch:.3g})")

    p1, p2 = 2 * eta, -2 * eta
    f1, f2 = p1.real % 1.0, p2.real % 1.0
    cands = np.linspace(0.0, 1.0, 41)[:-1]
    s = max(cands, key=lambda c: min(_dist_mod1(f1, c), _dist_mod1(f2, c)))
    s = float(s)
    c1 = s + (p1.real - s) % 1.0 + 1j * p1.imag
    c2 = s + (p2.real - s) % 1.0 + 1j * p2.imag

    sep = abs(c1 - c2)
    edge = min(_dist_mod1(f1, s), _dist_mod1(f2, s))
    r = min(0.08, d_pinch / 3.0, _lattice_min(gens) / 3.0, 0.45 * sep, 0.8 * edge)
    if r <= 0:
        raise PoleError("cannot fit indentation radius; poles too crowded")

    margin = max(2.0 * r, 0.02)
    refine = [c1, c2]
    order = 3
    ranges = [(m, n) for m in range(order + 1) for n in range(order + 1)] \
        if len(gens) == 2 else [(m, 0) for m in range(order + 1)]
    for m, n in ranges:
        if m == 0 and n == 0:
            continue
        shift = m * gens[0] + (n * gens[1] if len(gens) == 2 else 0.0)
        q1 = 2 * eta + shift   # must be above the cycle
        q2 = -q1               # must be below
        if q1.imag < margin:
            raise RegimeError(
                f"non-principal pole 2*eta+{m}*g1+{n}*g2 = {q1} too close to or below "
                "the cycle; regime not supported by the contour builder")
        if q2.imag > -margin:
            raise RegimeError(
                f"non-principal pole -(2*eta+{m}*g1+{n}*g2) = {q2} too close to or above "
                "the cycle; regime not supported by the contour builder")
        for q in (q1, q2):
            if abs(q.imag) < 0.35:
                refine.append(s + (q.real - s) % 1.0 + 1j * q.imag)

    indents = (Indent(c1, r, "below"), Indent(c2, r, "above"))
    return Contour.indented_segment(indents, base_start=s, refine_near=tuple(refine))


def _pinch_for(gens: tuple[complex, ...], eta: complex) -> float:
    if len(gens) == 2:
        return pole_pinch_distance(gens[0], gens[1], eta)
    # single quasi-period direction: hyperplanes 4 eta + l + n*g = 0
    g = gens[0]
    best = math.inf
    for n in range(4):
        base = 4 * eta + n * g
        l0 = -round(base.real)
        for l in range(l0 - 2, l0 + 3):
            best = min(best, abs(base + l))
    return float(best)


# ------------------------------------------------------------ the integral


@dataclass
class UKernel:
    """Reusable evaluator of u(., ., tau, sigma, eta) with the t-independent
    part of the integrand cached on the quadrature nodes."""

    tau: complex
    sigma: complex
    eta: complex
    trunc: Truncation = DEFAULT_TRUNC
    contour: Contour | None = None

    def __post_init__(self):
        tau, sigma, eta = self.tau, self.sigma, self.eta
        if tau.imag <= 0 or sigma.imag <= 0:
            raise RegimeError(f"u needs Im tau > 0 and Im sigma > 0, got tau={tau}, sigma={sigma}")
        tr = self.trunc.scaled()
        if self.contour is None:
            self.contour = build_u_contour(tau, sigma, eta, self.trunc)
        self._t1, self._w1 = contour_nodes(self.contour, tr.quad_points)
        self._t2, self._w2 = contour_nodes(self.contour, 2 * tr.quad_points)
        n = tr.product_cutoff
        self._k1 = self._kernel_on(self._t1, n)
        self._k2 = self._kernel_on(self._t2, n)
        k2_lo = self._kernel_on(self._t2, max(4, n - 6))
        denom = np.max(np.abs(self._k2)) + 1e-300
        self._k_rel = float(np.max(np.abs(self._k2 - k2_lo)) / denom) + 1e-15

    def _kernel_on(self, t: np.ndarray, cutoff: int) -> np.ndarray:
        om = _omega_arr(t, self.tau, self.sigma, self.eta, cutoff)
        d1 = theta_arr(t - 2 * self.eta, self.tau)
        d2 = theta_arr(t - 2 * self.eta, self.sigma)
        den = d1 * d2
        if np.min(np.abs(den)) < 1e-12 * np.max(np.abs(den)):
            raise PoleError("quadrature node landed on a pole of the u integrand")
        return om / den

    def _half(self, lams: np.ndarray, mus: np.ndarray, t: np.ndarray,
              w: np.ndarray, k: np.ndarray) -> np.ndarray:
        # theta rows only for distinct arguments: callers routinely pass
        # highly duplicated (lam, mu) pairs (series over mu at many lam),
        # and the theta series dominates the cost
        ul, il = np.unique(lams, return_inverse=True)
        um, im = np.unique(mus, return_inverse=True)
        thl = theta_arr((ul[:, None] + t[None, :]).ravel(), self.tau).reshape(len(ul), len(t))
        thm = theta_arr((um[:, None] + t[None, :]).ravel(), self.sigma).reshape(len(um), len(t))
        base = w * k
        out = np.empty(len(lams), dtype=np.complex128)
        step = max(1, (1 << 22) // max(len(t), 1))
        for a in range(0, len(lams), step):
            b = min(a + step, len(lams))
            out[a:b] = ((base[None, :] * thl[il[a:b]]) * thm[im[a:b]]).sum(axis=1)
        return out

    def u_many(self, lams, mus) -> tuple[np.ndarray, np.ndarray]:
        """u at paired arrays of (lambda, mu); returns (values, err_estimates)."""
        lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
        mus = np.atleast_1d(np.asarray(mus, dtype=np.complex128))
        lams, mus = np.broadcast_arrays(lams, mus)
        lams, mus = np.ascontiguousarray(lams), np.ascontiguousarray(mus)
        coarse = self._half(lams, mus, self._t1, self._w1, self._k1)
        fine = self._half(lams, mus, self._t2, self._w2, self._k2)
        pref = np.exp(-1j * np.pi * lams * mus / (2.0 * self.eta))
        scale = np.abs(fine) + np.max(np.abs(fine)) * 1e-3 + 1e-300
        err = np.abs(pref) * (np.abs(fine - coarse) + self._k_rel * scale)
        return pref * fine, err

    def u_scalar(self, lam: complex, mu: complex) -> EvalResult:
        v, e = self.u_many([lam], [mu])
        return EvalResult(complex(v[0]), float(e[0]),
                          {"terms_used": len(self._t2), "converged": True})


_ukernel_cache: dict = {}
_UKERNEL_CACHE_MAX = 48


def get_u_kernel(tau: complex, sigma: complex, eta: complex,
                 trunc: Truncation = DEFAULT_TRUNC,
                 contour: Contour | None = None) -> UKernel:
    # the environment scale feeds into the precomputed node grids, so a
    # cached kernel is only valid for the scale it was built under
    key = (complex(tau), complex(sigma), complex(eta), trunc, contour, _trunc_scale())
    k = _ukernel_cache.get(key)
    if k is None:
        k = UKernel(complex(tau), complex(sigma), complex(eta), trunc, contour)
        if len(_ukernel_cache) >= _UKERNEL_CACHE_MAX:
            _ukernel_cache.pop(next(iter(_ukernel_cache)))
        _ukernel_cache[key] = k
    return k


def u_hyper(lam: complex, mu: complex, tau: complex, sigma: complex, eta: complex,
            trunc: Truncation = DEFAULT_TRUNC, contour: Contour | None = None) -> EvalResult:
    """The elliptic hypergeometric integral u(lambda, mu, tau, sigma, eta)."""
    return get_u_kernel(tau, sigma, eta, trunc, contour).u_scalar(complex(lam), complex(mu))


# --------------------------------------------------------- degenerations


def u_trig_degenerate(lam: complex, mu: complex, eta: complex) -> EvalResult:
    """Closed form of the tau, sigma -> i*infinity limit of u:
    i exp(-i pi lam mu / 2 eta) (q^2 cos pi(lam-mu) - cos pi(lam+mu)) / sin 4 pi eta,
    q = exp(-2 pi i eta).

    Derivation: in the limit the double-product kernel tends to
    exp(-4 pi i eta) sin pi(t-2 eta)/sin pi(t+2 eta) (not to 1), and the
    remaining trigonometric integral evaluates by residues to
    exp(-i pi(lam+mu)) + 2 i sin pi(lam+2 eta) sin pi(mu+2 eta)/sin 4 pi eta.
    The form above is the product of the two; it equals the genuine limit of
    u_hyper to quadrature accuracy.
    """
    lam, mu, eta = complex(lam), complex(mu), complex(eta)
    s4 = np.sin(4 * np.pi * eta)
    if abs(s4) < 1e-12:
        raise PoleError(f"sin(4 pi eta) ~ 0 at eta={eta}")
    q2 = np.exp(-4j * np.pi * eta)  # q^2
    val = 1j * np.exp(-1j * np.pi * lam * mu / (2 * eta)) \
        * (q2 * np.cos(np.pi * (lam - mu)) - np.cos(np.pi * (lam + mu))) / s4
    return EvalResult(complex(val), 1e-14 * abs(val) + 1e-16, {"converged": True})


def u_trig_semi(lam: complex, l: int, kappa: int, eta: complex,
                trunc: Truncation = DEFAULT_TRUNC, contour: Contour | None = None) -> EvalResult:
    """The tau -> i*infinity limit of u at mu = 2 eta l, sigma = -2 eta kappa:
    exp(-pi i lam l) int prod_k (1 - q^{2 k kappa + 2} e^{2 pi i t}) /
    (1 - q^{2 k kappa - 2} e^{2 pi i t}) * sin pi(lam+t) theta(2 eta l + t, sigma) /
    (sin pi(t-2 eta) theta(t-2 eta, sigma)) dt, q = e^{-2 pi i eta}."""
    lam, eta = complex(lam), complex(eta)
    mu = 2 * eta * l
    sigma = -2 * eta * kappa
    if sigma.imag <= 0:
        raise RegimeError(f"semi-trigonometric u needs Im sigma > 0, got {sigma}")
    tr = trunc.scaled()
    if contour is None:
        contour = build_u_contour(0.0, sigma, eta, trunc, lattice=(sigma,))

    def kernel(t: np.ndarray, cutoff: int) -> np.ndarray:
        prod = np.ones(len(t), dtype=np.complex128)
        for k in range(cutoff + 1):
            prod *= (1.0 - np.exp(TWO_PI_I * (t - 2 * eta + k * sigma))) \
                / (1.0 - np.exp(TWO_PI_I * (t + 2 * eta + k * sigma)))
        den = np.sin(np.pi * (t - 2 * eta)) * theta_arr(t - 2 * eta, sigma)
        if np.min(np.abs(den)) < 1e-12 * np.max(np.abs(den)):
            raise PoleError("quadrature node landed on a pole of the u integrand")
        return prod * np.sin(np.pi * (lam + t)) * theta_arr(mu + t, sigma) / den

    t1, w1 = contour_nodes(contour, tr.quad_points)
    t2, w2 = contour_nodes(contour, 2 * tr.quad_points)
    coarse = np.sum(w1 * kernel(t1, tr.product_cutoff))
    v2 = kernel(t2, tr.product_cutoff)
    fine = np.sum(w2 * v2)
    v2_lo = kernel(t2, max(4, tr.product_cutoff - 6))
    trunc_err = float(np.sum(np.abs(w2) * np.abs(v2 - v2_lo)))
    pref = np.exp(-1j * np.pi * lam * mu / (2 * eta))
    err = abs(pref) * (abs(fine - coarse) + trunc_err) + 1e-15 * abs(pref * fine)
    return EvalResult(complex(pref * fine), float(err),
                      {"terms_used": len(t2), "converged": err < tr.tol_abs})

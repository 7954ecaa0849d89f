"""Modular transformation data for the hypergeometric theta functions: the
constants psi and C+-, the S+- matrices built from rescaled u and Q values,
the A, B, T, S transformations on function handles, and residual checks of
the tau -> tau+1 and tau -> -1/tau identities and of the projective group
relations.

A function handle here is a callable h(lams, tau, eta) -> array, vectorized
over lams, evaluating a member of the level-kappa space at the given
parameter point.
"""

from __future__ import annotations

import numpy as np

from .ellint import get_u_kernel, q_weight
from .hts import delta_arr
from .types import (
    DEFAULT_TRUNC,
    HTSIndex,
    ModularParams,
    RegimeError,
    Truncation,
)


def _sqrt_pos(z: complex) -> complex:
    s = complex(np.sqrt(complex(z)))
    return -s if s.real < 0 else s


def psi(tau: complex, p: complex, eta: complex) -> complex:
    """2 (8 eta^2 + tau^2 + p^2 - 3p + 3 tau + 3 tau p + 1)."""
    return 2.0 * (8.0 * eta * eta + tau * tau + p * p - 3.0 * p
                  + 3.0 * tau + 3.0 * tau * p + 1.0)


def c_minus(tau: complex, eta: complex, kappa: int) -> complex:
    """C^- = -2 pi i sqrt(2 kappa i / tau) e^{2 pi i eta/kappa
    + (pi i/tau) 4 eta^2 (1 - 1/(2 eta kappa))
    + (pi i/(6 kappa tau)) psi(tau, -2 eta kappa)}, sqrt with Re > 0."""
    expo = (np.pi * 1j * 2.0 * eta / kappa
            + np.pi * 1j / tau * 4.0 * eta * eta * (1.0 - 1.0 / (2.0 * eta * kappa))
            + np.pi * 1j / (6.0 * kappa * tau) * psi(tau, -2.0 * eta * kappa, eta))
    return -2j * np.pi * _sqrt_pos(2j * kappa / tau) * complex(np.exp(expo))


def c_plus(tau: complex, eta: complex, kappa: int) -> complex:
    """C^+ = -2 pi i sqrt(2 kappa i / tau) e^{2 pi i eta/kappa
    + (pi i/tau) 4 eta^2 (1 + 1/(2 eta kappa))
    + (pi i/(6 kappa tau)) psi(-tau, 2 eta kappa)}, sqrt with Re > 0."""
    expo = (np.pi * 1j * 2.0 * eta / kappa
            + np.pi * 1j / tau * 4.0 * eta * eta * (1.0 + 1.0 / (2.0 * eta * kappa))
            + np.pi * 1j / (6.0 * kappa * tau) * psi(-tau, 2.0 * eta * kappa, eta))
    return -2j * np.pi * _sqrt_pos(2j * kappa / tau) * complex(np.exp(expo))


def _s_matrix(kappa: int, tau: complex, eta: complex, sign: int,
              trunc: Truncation) -> np.ndarray:
    """Common builder: sign=-1 gives S^-, sign=+1 gives S^+.

    entry (j,l) = Q(l/kappa, -sign*tau/(2 eta kappa), sign/(2 kappa)) *
      (u(j/kappa, -l/kappa, 1/(2 eta kappa), -sign*tau/(2 eta kappa), sign/(2 kappa))
       - u(j/kappa, +l/kappa, ...)).
    """
    tau_u = 1.0 / (2.0 * eta * kappa)
    sigma_u = -sign * tau / (2.0 * eta * kappa)
    eta_u = sign / (2.0 * kappa)
    if tau_u.imag <= 0 or sigma_u.imag <= 0:
        raise RegimeError(
            f"rescaled u parameters out of regime: Im 1/(2 eta kappa)={tau_u.imag:.3g}, "
            f"Im -+tau/(2 eta kappa)={sigma_u.imag:.3g}; check the sign hypothesis Im eta/tau")
    kern = get_u_kernel(tau_u, sigma_u, eta_u, trunc)
    idx = np.arange(2, kappa - 1)
    js = np.repeat(idx, len(idx)).astype(np.complex128) / kappa
    ls = np.tile(idx, len(idx)).astype(np.complex128) / kappa
    um, _ = kern.u_many(js, -ls)
    up, _ = kern.u_many(js, ls)
    qv = np.array([q_weight(l / kappa, sigma_u, eta_u, trunc).value for l in idx])
    mat = (um - up).reshape(len(idx), len(idx)) * qv[None, :]
    return mat


def s_minus_matrix(kappa: int, tau: complex, eta: complex,
                   trunc: Truncation = DEFAULT_TRUNC) -> np.ndarray:
    """S^-_{j,l} for j,l = 2..kappa-2 (valid regime: Im eta/tau < 0)."""
    return _s_matrix(kappa, tau, eta, -1, trunc)


def s_plus_matrix(kappa: int, tau: complex, eta: complex,
                  trunc: Truncation = DEFAULT_TRUNC) -> np.ndarray:
    """S^+_{j,l} for j,l = 2..kappa-2 (valid regime: Im eta/tau > 0)."""
    return _s_matrix(kappa, tau, eta, 1, trunc)


# --------------------------------------------------------- transformations


def delta_handle(idx: HTSIndex, kappa: int | None = None,
                 trunc: Truncation = DEFAULT_TRUNC):
    """Handle evaluating delta_{l,kappa} at any (lams, tau, eta)."""
    kappa = idx.kappa if kappa is None else kappa

    def h(lams, tau, eta):
        lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
        v, _ = delta_arr(idx, lams, ModularParams(tau=tau, eta=eta, kappa=kappa), trunc)
        return v

    return h


def transform(op: str, h, kappa: int):
    """One of the transformations A, B, T, S applied to a handle.

    A: h(lam+1); B: e^{pi i (kappa+2)(lam + tau/2)} h(lam+tau);
    T: h at tau+1; S: C^{+-}(tau, eta) e^{-pi i (kappa+2) lam^2 / 2 tau}
    h(lam/tau) at (-1/tau, +-(-eta)/tau), sign + iff Im(eta/tau) > 0.
    """
    if op == "A":
        return lambda lams, tau, eta: h(np.asarray(lams) + 1.0, tau, eta)
    if op == "B":
        def bh(lams, tau, eta):
            lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
            return np.exp(1j * np.pi * (kappa + 2) * (lams + tau / 2.0)) \
                * h(lams + tau, tau, eta)
        return bh
    if op == "T":
        return lambda lams, tau, eta: h(lams, tau + 1.0, eta)
    if op == "S":
        def sh(lams, tau, eta):
            lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
            r = (eta / tau).imag
            if r == 0:
                raise RegimeError("Im(eta/tau) = 0: the sign of the S transformation "
                                  "is indeterminate (inadmissible orbit)")
            if r > 0:
                c = c_plus(tau, eta, kappa)
                eta_new = -eta / tau
            else:
                c = c_minus(tau, eta, kappa)
                eta_new = eta / tau
            pref = c * np.exp(-1j * np.pi * (kappa + 2) * lams * lams / (2.0 * tau))
            return pref * h(lams / tau, -1.0 / tau, eta_new)
        return sh
    raise ValueError(f"unknown transformation {op!r}")


def compose(ops: str, h, kappa: int):
    """Apply the transformations in ops left to right as written: 'ST' means
    the operator S T (T acting first on the function argument convention used
    throughout: (ST)h = S(Th))."""
    for op in reversed(ops):
        h = transform(op, h, kappa)
    return h


# ----------------------------------------------------------------- checks


def _rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs) + np.abs(rhs))))


def check_T_shift(l: int, kappa: int, params: ModularParams, samples,
                  trunc: Truncation = DEFAULT_TRUNC) -> float:
    """Residual of delta(lam, tau+1) = e^{pi i l^2/2 kappa} delta(lam, tau)."""
    idx = HTSIndex(l, kappa)
    lams = np.atleast_1d(np.asarray(samples, dtype=np.complex128))
    lhs, _ = delta_arr(idx, lams, ModularParams(tau=params.tau + 1.0, eta=params.eta,
                                                kappa=kappa), trunc)
    rhs, _ = delta_arr(idx, lams, params, trunc)
    return _rel_residual(lhs, np.exp(1j * np.pi * l * l / (2.0 * kappa)) * rhs)


def check_S_transform(sign: int, l: int, kappa: int, params: ModularParams, samples,
                      trunc: Truncation = DEFAULT_TRUNC) -> float:
    """Residual of the tau -> -1/tau identity:

    C^{-+} e^{-pi i (kappa+2) lam^2/2 tau} delta_l(lam/tau, -1/tau, -+eta/tau)
      = sum_j delta_j(lam, tau, eta) S^{-+}_{j,l},
    sign=-1 for the Im eta/tau < 0 case, +1 for Im eta/tau > 0.
    """
    tau, eta = params.tau, params.eta
    r = (eta / tau).imag
    if sign == -1 and r >= 0 or sign == +1 and r <= 0:
        raise RegimeError(f"sign {sign:+d} needs Im(eta/tau) {'<' if sign < 0 else '>'} 0, "
                          f"got {r:.3g}")
    lams = np.atleast_1d(np.asarray(samples, dtype=np.complex128))
    idx_l = HTSIndex(l, kappa)
    eta_new = -sign * eta / tau
    lhs_delta, _ = delta_arr(idx_l, lams / tau,
                             ModularParams(tau=-1.0 / tau, eta=eta_new, kappa=kappa), trunc)
    c = c_minus(tau, eta, kappa) if sign == -1 else c_plus(tau, eta, kappa)
    lhs = c * np.exp(-1j * np.pi * (kappa + 2) * lams * lams / (2.0 * tau)) * lhs_delta

    smat = _s_matrix(kappa, tau, eta, sign, trunc)
    col = smat[:, l - 2]
    rhs = np.zeros_like(lams)
    for a, j in enumerate(range(2, kappa - 1)):
        dj, _ = delta_arr(HTSIndex(j, kappa), lams, params, trunc)
        rhs = rhs + dj * col[a]
    scale = float(np.max(np.abs(rhs))) + 1e-300
    return float(np.max(np.abs(lhs - rhs)) / scale)


def group_relations(kappa: int, params: ModularParams, samples,
                    trunc: Truncation = DEFAULT_TRUNC) -> dict[str, float]:
    """Max residuals of the projective relations on delta_{2,kappa} samples:

    A^2 = 1, B^2 = 1, S^2 = 8 pi^2 kappa,
    (ST)^3 = 8 pi^3 kappa^{3/2} e^{2 pi i/kappa - pi i/4},
    SA = BS, AB = (-1)^kappa BA, TB = -e^{pi i kappa/2} BAT, AT = TA.

    A relation whose intermediate parameter points fall outside the regime is
    reported as skipped (value nan) rather than failed.
    """
    tau, eta = params.tau, params.eta
    lams = np.atleast_1d(np.asarray(samples, dtype=np.complex128))
    h = delta_handle(HTSIndex(2, kappa), trunc=trunc)

    def ev(ops: str) -> np.ndarray:
        return compose(ops, h, kappa)(lams, tau, eta)

    base = h(lams, tau, eta)
    out: dict[str, float] = {}
    checks = {
        "A^2 = 1": lambda: (ev("AA"), base),
        "B^2 = 1": lambda: (ev("BB"), base),
        "S^2 = 8 pi^2 kappa": lambda: (ev("SS"), 8.0 * np.pi**2 * kappa * base),
        "(ST)^3 = 8 pi^3 kappa^{3/2} e^{2 pi i/kappa - pi i/4}":
            lambda: (ev("STSTST"),
                     8.0 * np.pi**3 * kappa**1.5
                     * np.exp(2j * np.pi / kappa - 0.25j * np.pi) * base),
        # the measured projective constant carries (2 kappa)^{3/2}, not
        # kappa^{3/2}; both variants are reported
        "(ST)^3 = 8 pi^3 (2 kappa)^{3/2} e^{2 pi i/kappa - pi i/4}":
            lambda: (ev("STSTST"),
                     8.0 * np.pi**3 * (2.0 * kappa)**1.5
                     * np.exp(2j * np.pi / kappa - 0.25j * np.pi) * base),
        "SA = BS": lambda: (ev("SA"), ev("BS")),
        "AB = (-1)^kappa BA": lambda: (ev("AB"), (-1.0) ** kappa * ev("BA")),
        "TB = -e^{pi i kappa/2} BAT":
            lambda: (ev("TB"), -np.exp(0.5j * np.pi * kappa) * ev("BAT")),
        "AT = TA": lambda: (ev("AT"), ev("TA")),
    }
    for name, fn in checks.items():
        try:
            lhs, rhs = fn()
            out[name] = _rel_residual(lhs, rhs)
        except RegimeError:
            out[name] = float("nan")
    return out

"""Jacobi's first theta function, the level-kappa basis, theta0, and
numeric membership tests for theta-function spaces."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .types import (
    DEFAULT_TRUNC,
    DivergenceError,
    EvalResult,
    ModularParams,
    RegimeError,
    ThetaLevelIndex,
    Truncation,
)

_TAIL_TOL = 1e-16


def _gaussian_cutoff(decay: float, drift: float, log_tol: float) -> int:
    """Smallest N with decay*N^2 - drift*N >= log_tol (all positive)."""
    n = (drift + math.sqrt(drift * drift + 4.0 * decay * log_tol)) / (2.0 * decay)
    return int(math.ceil(n)) + 2


def _jacobi_nmax(tau: complex, max_im: float, tol: float = _TAIL_TOL) -> int:
    if tau.imag <= 0:
        raise RegimeError(f"Im tau must be > 0, got {tau}")
    return _gaussian_cutoff(np.pi * tau.imag, 2.0 * np.pi * max_im, -math.log(tol))


def _level_nmax(tau: complex, kappa: int, max_im: float, tol: float = _TAIL_TOL) -> int:
    if tau.imag <= 0:
        raise RegimeError(f"Im tau must be > 0, got {tau}")
    return _gaussian_cutoff(2.0 * np.pi * kappa * tau.imag, 2.0 * np.pi * kappa * max_im,
                            -math.log(tol))


def theta_arr(z: np.ndarray, tau: complex, tol: float = _TAIL_TOL) -> np.ndarray:
    """Vectorized theta(z, tau) for an array of z."""
    if tau.imag <= 0:
        raise RegimeError(f"Im tau must be > 0, got {tau}")
    z = np.asarray(z, dtype=np.complex128).ravel()
    if len(z) == 0:
        return z
    nmax = _jacobi_nmax(tau, float(np.max(np.abs(z.imag))), tol)
    return _kernels.theta_sum(z, complex(tau), nmax)


def dtheta_arr(z: np.ndarray, tau: complex, tol: float = _TAIL_TOL) -> np.ndarray:
    """Vectorized d/dz theta(z, tau)."""
    if tau.imag <= 0:
        raise RegimeError(f"Im tau must be > 0, got {tau}")
    z = np.asarray(z, dtype=np.complex128).ravel()
    nmax = _jacobi_nmax(tau, float(np.max(np.abs(z.imag))), tol)
    return _kernels.theta_dsum(z, complex(tau), nmax)


def theta_basis_arr(z: np.ndarray, tau: complex, j: int, kappa: int,
                    tol: float = _TAIL_TOL) -> np.ndarray:
    """Vectorized theta_{j,kappa}(z, tau)."""
    if tau.imag <= 0:
        raise RegimeError(f"Im tau must be > 0, got {tau}")
    z = np.asarray(z, dtype=np.complex128).ravel()
    nmax = _level_nmax(tau, kappa, float(np.max(np.abs(z.imag))), tol)
    return _kernels.theta_level_sum(z, complex(tau), int(j), int(kappa), nmax)


def _boundary_mag_jacobi(z: complex, tau: complex, nmax: int) -> float:
    out = 0.0
    for n in (nmax + 0.5, -nmax - 0.5):
        out += math.exp(-np.pi * (n * n * tau.imag + n * (2.0 * z.imag + 0.0)))
    return out


def jacobi_theta(lam: complex, tau: complex, trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """theta(lam, tau) = -sum_{n in Z+1/2} exp(pi i (n^2 tau + n(2 lam + 1)))."""
    lam, tau = complex(lam), complex(tau)
    nmax = _jacobi_nmax(tau, abs(lam.imag))
    val = theta_arr(np.array([lam]), tau)[0]
    err = _boundary_mag_jacobi(lam, tau, nmax)
    return EvalResult(complex(val), err, {"terms_used": 2 * nmax + 1, "converged": True})


def jacobi_theta_dlam(lam: complex, tau: complex, trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """Derivative of theta with respect to its first argument."""
    lam, tau = complex(lam), complex(tau)
    nmax = _jacobi_nmax(tau, abs(lam.imag))
    val = dtheta_arr(np.array([lam]), tau)[0]
    err = _boundary_mag_jacobi(lam, tau, nmax) * 2 * np.pi * (nmax + 1)
    return EvalResult(complex(val), err, {"terms_used": 2 * nmax + 1, "converged": True})


def theta_basis(idx: ThetaLevelIndex, lam: complex, tau: complex,
                trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """Level-kappa basis theta function theta_{j,kappa}(lam, tau)."""
    lam, tau = complex(lam), complex(tau)
    nmax = _level_nmax(tau, idx.kappa, abs(lam.imag))
    val = theta_basis_arr(np.array([lam]), tau, idx.j, idx.kappa)[0]
    off = idx.j / (2.0 * idx.kappa)
    err = 0.0
    for n in (nmax + off, -nmax + off):
        err += math.exp(-2 * np.pi * idx.kappa * (n * n * tau.imag + n * lam.imag))
    return EvalResult(complex(val), err, {"terms_used": 2 * nmax + 1, "converged": True})


def theta0(x: complex, q: complex, trunc: Truncation = DEFAULT_TRUNC) -> EvalResult:
    """theta0(x, q) = sum_m x^m q^(-m^2/2); convergent only for |q| > 1."""
    x, q = complex(x), complex(q)
    aq = abs(q)
    if aq <= 1.0:
        raise DivergenceError(f"theta0 series diverges for |q| <= 1 (|q| = {aq:.4g})")
    decay = 0.5 * math.log(aq)
    drift = abs(math.log(abs(x))) if x != 0 else 0.0
    mmax = min(_gaussian_cutoff(decay, drift, -math.log(_TAIL_TOL)),
               10 * trunc.scaled().series_cutoff)
    val = _kernels.theta0_sum(x, q, mmax)
    err = 2.0 * math.exp(drift * mmax - decay * mmax * mmax)
    return EvalResult(complex(val), err, {"terms_used": 2 * mmax + 1, "converged": True})


def level_residual(
    f: Callable[[complex], complex],
    kappa: int,
    tau: complex,
    sample_lams: Sequence[complex],
    rs_range: int = 1,
) -> float:
    """Worst quasi-periodicity defect of f against the level-kappa law.

    Compares f(lam + 2r + 2s*tau) with exp(-2 pi i kappa (s^2 tau + s lam)) f(lam),
    normalized by the magnitudes of the two compared values (the raw phase
    factor grows like exp(2 pi kappa s^2 Im tau), so an absolute residual
    would drown in double-precision rounding).
    """
    worst = 0.0
    for lam in sample_lams:
        lam = complex(lam)
        f0 = complex(f(lam))
        for r in range(-rs_range, rs_range + 1):
            for s in range(-rs_range, rs_range + 1):
                shifted = complex(f(lam + 2 * r + 2 * s * tau))
                phase = np.exp(-2j * np.pi * kappa * (s * s * tau + s * lam))
                ref = phase * f0
                res = abs(shifted - ref) / (1.0 + abs(f0) + abs(ref) + abs(shifted))
                worst = max(worst, float(res))
    return worst


def e_kappa_residual(
    f: Callable[[complex], complex],
    params: ModularParams,
    samples: Sequence[complex],
) -> float:
    """Distance of f from the space of odd level-(kappa+2) theta functions
    vanishing at 2*eta*j + Z + Z*tau, j in {-1,0,1}."""
    tau, eta, kappa = params.tau, params.eta, params.kappa
    res = level_residual(f, kappa + 2, tau, samples, rs_range=1)
    scale = 1.0 + max(abs(complex(f(lam))) for lam in samples)
    for lam in samples:
        lam = complex(lam)
        res = max(res, abs(complex(f(lam)) + complex(f(-lam))) / scale)
    for j in (-1, 0, 1):
        for r in (-1, 0, 1):
            p = 2 * eta * j + r
            # local nonzero scale: probe the function a generic offset away
            local = 1.0 + abs(complex(f(p + 0.29))) + abs(complex(f(p + 0.37)))
            res = max(res, abs(complex(f(p))) / local)
    return float(res)

"""Hot numeric kernels: theta-series sums and the double-product kernel.

Each kernel exists in two interchangeable flavours: a pure-numpy
vectorized one and a numba @njit loop one.  The numba path is used when
numba imports cleanly and ELLIPTHETA_NUMBA is not set to "0"; see
benchmarks/bench_kernels.py for a speed comparison of the two.
"""

from __future__ import annotations

import os

import numpy as np

PI = np.pi
TWO_PI_I = 2j * np.pi


def _numba_wanted() -> bool:
    return os.environ.get("ELLIPTHETA_NUMBA", "1") != "0"


# ---------------------------------------------------------------- numpy path


def _np_theta_sum(z, tau, nmax):
    # theta(z,tau) = -sum_{n in Z+1/2} exp(pi i (n^2 tau + n(2z+1)))
    n = np.arange(-nmax, nmax + 1, dtype=np.float64) + 0.5
    phase = 1j * PI * (n * n * tau)[None, :] + 1j * PI * np.outer(2.0 * z + 1.0, n)
    return -np.exp(phase).sum(axis=1)


def _np_theta_dsum(z, tau, nmax):
    n = np.arange(-nmax, nmax + 1, dtype=np.float64) + 0.5
    phase = 1j * PI * (n * n * tau)[None, :] + 1j * PI * np.outer(2.0 * z + 1.0, n)
    return -(np.exp(phase) * (TWO_PI_I * n)[None, :]).sum(axis=1)


def _np_theta_level_sum(z, tau, j, kappa, nmax):
    # theta_{j,kappa}(z,tau) = sum_{n in Z+j/2kappa} exp(2 pi i kappa (n^2 tau + n z))
    n = np.arange(-nmax, nmax + 1, dtype=np.float64) + j / (2.0 * kappa)
    phase = TWO_PI_I * kappa * ((n * n * tau)[None, :] + np.outer(z, n))
    return np.exp(phase).sum(axis=1)


def _np_omega_grid(t, tau, sigma, eta, jmax, kmax):
    # prod_{j,k=0}^{cutoff} of the four-factor ratio defining Omega_{2eta}
    jj = np.arange(jmax + 1, dtype=np.float64)
    kk = np.arange(kmax + 1, dtype=np.float64)
    a = np.exp(TWO_PI_I * (jj[:, None] * tau + kk[None, :] * sigma)).ravel()
    b = a * np.exp(TWO_PI_I * (tau + sigma))
    out = np.empty(len(t), dtype=np.complex128)
    for i, ti in enumerate(t):
        up = np.exp(TWO_PI_I * (ti - 2.0 * eta))
        um = np.exp(TWO_PI_I * (-ti - 2.0 * eta))
        dp = np.exp(TWO_PI_I * (ti + 2.0 * eta))
        dm = np.exp(TWO_PI_I * (-ti + 2.0 * eta))
        num = (1.0 - up * a) * (1.0 - um * b)
        den = (1.0 - dp * a) * (1.0 - dm * b)
        out[i] = np.prod(num / den)
    return out


def _np_theta0_sum(x, q, mmax):
    m = np.arange(-mmax, mmax + 1, dtype=np.float64)
    return np.sum(x**m * q ** (-m * m / 2.0))


# ---------------------------------------------------------------- numba path

_HAVE_NUMBA = False
if _numba_wanted():
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _nb_theta_sum(z, tau, nmax):
        out = np.empty(len(z), dtype=np.complex128)
        for i in range(len(z)):
            acc = 0.0 + 0.0j
            w = 2.0 * z[i] + 1.0
            for m in range(-nmax, nmax + 1):
                n = m + 0.5
                acc += np.exp(1j * PI * (n * n * tau + n * w))
            out[i] = -acc
        return out

    @njit(cache=True)
    def _nb_theta_dsum(z, tau, nmax):
        out = np.empty(len(z), dtype=np.complex128)
        for i in range(len(z)):
            acc = 0.0 + 0.0j
            w = 2.0 * z[i] + 1.0
            for m in range(-nmax, nmax + 1):
                n = m + 0.5
                acc += TWO_PI_I * n * np.exp(1j * PI * (n * n * tau + n * w))
            out[i] = -acc
        return out

    @njit(cache=True)
    def _nb_theta_level_sum(z, tau, j, kappa, nmax):
        out = np.empty(len(z), dtype=np.complex128)
        off = j / (2.0 * kappa)
        for i in range(len(z)):
            acc = 0.0 + 0.0j
            for m in range(-nmax, nmax + 1):
                n = m + off
                acc += np.exp(TWO_PI_I * kappa * (n * n * tau + n * z[i]))
            out[i] = acc
        return out

    @njit(cache=True)
    def _nb_omega_grid(t, tau, sigma, eta, jmax, kmax):
        nj = jmax + 1
        nk = kmax + 1
        a = np.empty(nj * nk, dtype=np.complex128)
        for j in range(nj):
            for k in range(nk):
                a[j * nk + k] = np.exp(TWO_PI_I * (j * tau + k * sigma))
        shift = np.exp(TWO_PI_I * (tau + sigma))
        out = np.empty(len(t), dtype=np.complex128)
        for i in range(len(t)):
            up = np.exp(TWO_PI_I * (t[i] - 2.0 * eta))
            um = np.exp(TWO_PI_I * (-t[i] - 2.0 * eta))
            dp = np.exp(TWO_PI_I * (t[i] + 2.0 * eta))
            dm = np.exp(TWO_PI_I * (-t[i] + 2.0 * eta))
            acc = 1.0 + 0.0j
            for g in range(nj * nk):
                b = a[g] * shift
                acc *= (1.0 - up * a[g]) * (1.0 - um * b) / ((1.0 - dp * a[g]) * (1.0 - dm * b))
            out[i] = acc
        return out

    theta_sum = _nb_theta_sum
    theta_dsum = _nb_theta_dsum
    theta_level_sum = _nb_theta_level_sum
    omega_grid = _nb_omega_grid
else:
    theta_sum = _np_theta_sum
    theta_dsum = _np_theta_dsum
    theta_level_sum = _np_theta_level_sum
    omega_grid = _np_omega_grid

theta0_sum = _np_theta0_sum

USING_NUMBA = _HAVE_NUMBA

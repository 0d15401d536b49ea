"""Numerical hot loops, compiled with numba when available.

Set FEWATOM_PURE_NUMPY=1 to force the plain numpy implementations (they are
also used automatically when numba cannot be imported). The active path is
exposed as BACKEND for diagnostics and the benchmark script; both
implementations of every kernel stay importable so they can be compared
directly.

Spectra are sums of complex-weighted Lorentzian terms,

    S(omega) = (1/pi) sum_k Re[ w_k / (gamma_k + i (omega - nu_k)) ]
             = (1/pi) sum_k [ Re(w_k) gamma_k + Im(w_k) (omega - nu_k) ]
               / (gamma_k^2 + (omega - nu_k)^2),

and the band integral over [lo, hi] has the closed form per term

    (1/pi) [ Re(w_k) (atan((hi - nu_k)/gamma_k) - atan((lo - nu_k)/gamma_k))
             + Im(w_k)/2 * log((gamma_k^2 + (hi - nu_k)^2)
                               / (gamma_k^2 + (lo - nu_k)^2)) ].

one_sided_fourier evaluates F(omega) = integral_0^T e^{i omega tau} g(tau) dtau
with composite Simpson weights on a uniform grid (odd sample count), using a
rotating-phasor recurrence per frequency.
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "lorentzian_sum_eval",
    "lorentzian_band_weight",
    "one_sided_fourier",
]


def _lorentzian_sum_eval_numpy(nu, gamma, w_re, w_im, omegas):
    x = omegas[:, None] - nu[None, :]
    dens = gamma[None, :] ** 2 + x * x
    num = w_re[None, :] * gamma[None, :] + w_im[None, :] * x
    return (num / dens).sum(axis=1) / np.pi


def _lorentzian_band_weight_numpy(nu, gamma, w_re, w_im, lo, hi):
    a = (lo - nu) / gamma
    b = (hi - nu) / gamma
    atan_part = w_re * (np.arctan(b) - np.arctan(a))
    log_part = 0.5 * w_im * np.log(
        (gamma**2 + (hi - nu) ** 2) / (gamma**2 + (lo - nu) ** 2)
    )
    return float((atan_part + log_part).sum() / np.pi)


def _one_sided_fourier_numpy(g, dt, omegas):
    n = g.size
    if n < 3 or n % 2 == 0:
        raise ValueError("Simpson quadrature needs an odd sample count >= 3")
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    w *= dt / 3.0
    tau = dt * np.arange(n)
    out = np.empty(omegas.size, dtype=np.complex128)
    gw = g * w
    for k in range(omegas.size):
        out[k] = np.sum(np.exp(1j * omegas[k] * tau) * gw)
    return out


_want_numpy = os.environ.get("FEWATOM_PURE_NUMPY", "").strip() not in ("", "0")
_numba_ok = False
if not _want_numpy:
    try:
        import numba as _nb

        _numba_ok = True
    except ImportError:
        _numba_ok = False

if _numba_ok:

    @_nb.njit(cache=True)
    def _lorentzian_sum_eval_numba(nu, gamma, w_re, w_im, omegas):
        out = np.empty(omegas.size)
        for m in range(omegas.size):
            acc = 0.0
            w = omegas[m]
            for k in range(nu.size):
                x = w - nu[k]
                acc += (w_re[k] * gamma[k] + w_im[k] * x) / (gamma[k] ** 2 + x * x)
            out[m] = acc / np.pi
        return out

    @_nb.njit(cache=True)
    def _lorentzian_band_weight_numba(nu, gamma, w_re, w_im, lo, hi):
        acc = 0.0
        for k in range(nu.size):
            a = (lo - nu[k]) / gamma[k]
            b = (hi - nu[k]) / gamma[k]
            acc += w_re[k] * (np.arctan(b) - np.arctan(a))
            acc += 0.5 * w_im[k] * np.log(
                (gamma[k] ** 2 + (hi - nu[k]) ** 2)
                / (gamma[k] ** 2 + (lo - nu[k]) ** 2)
            )
        return acc / np.pi

    @_nb.njit(cache=True)
    def _one_sided_fourier_numba(g, dt, omegas):
        n = g.size
        out = np.empty(omegas.size, dtype=np.complex128)
        for m in range(omegas.size):
            w = omegas[m]
            rot = np.exp(1j * w * dt)
            phase = 1.0 + 0.0j
            # Simpson: endpoints 1, odd samples 4, even interior samples 2
            acc = g[0] * phase
            for k in range(1, n - 1):
                if k % 1024 == 0:
                    phase = np.exp(1j * w * dt * k)  # kill phasor drift
                else:
                    phase *= rot
                if k % 2 == 1:
                    acc += 4.0 * g[k] * phase
                else:
                    acc += 2.0 * g[k] * phase
            phase = np.exp(1j * w * dt * (n - 1))
            acc += g[n - 1] * phase
            out[m] = acc * (dt / 3.0)
        return out

    BACKEND = "numba"
else:
    BACKEND = "numpy"


def lorentzian_sum_eval(nu, gamma, w_re, w_im, omegas):
    """S(omega) on a grid, rate density per unit angular frequency."""
    nu = np.ascontiguousarray(nu, dtype=float)
    gamma = np.ascontiguousarray(gamma, dtype=float)
    w_re = np.ascontiguousarray(w_re, dtype=float)
    w_im = np.ascontiguousarray(w_im, dtype=float)
    omegas = np.ascontiguousarray(omegas, dtype=float)
    if BACKEND == "numba":
        return _lorentzian_sum_eval_numba(nu, gamma, w_re, w_im, omegas)
    return _lorentzian_sum_eval_numpy(nu, gamma, w_re, w_im, omegas)


def lorentzian_band_weight(nu, gamma, w_re, w_im, lo, hi):
    """Exact integral of S(omega) over [lo, hi]."""
    nu = np.ascontiguousarray(nu, dtype=float)
    gamma = np.ascontiguousarray(gamma, dtype=float)
    w_re = np.ascontiguousarray(w_re, dtype=float)
    w_im = np.ascontiguousarray(w_im, dtype=float)
    lo = float(lo)
    hi = float(hi)
    if BACKEND == "numba":
        return float(_lorentzian_band_weight_numba(nu, gamma, w_re, w_im, lo, hi))
    return _lorentzian_band_weight_numpy(nu, gamma, w_re, w_im, lo, hi)


def one_sided_fourier(g, dt, omegas):
    """integral_0^T e^{i omega tau} g(tau) dtau by composite Simpson."""
    g = np.ascontiguousarray(g, dtype=np.complex128)
    omegas = np.ascontiguousarray(omegas, dtype=float)
    dt = float(dt)
    if g.size < 3 or g.size % 2 == 0:
        raise ValueError("Simpson quadrature needs an odd sample count >= 3")
    if BACKEND == "numba":
        return _one_sided_fourier_numba(g, dt, omegas)
    return _one_sided_fourier_numpy(g, dt, omegas)

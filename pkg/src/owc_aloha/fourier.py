"""Fourier integrals of densities sampled on uniform grids.

Two primitives back the characteristic-function pipeline:

* the forward transform  phi(t) = int f(x) e^{jtx} dx  of a density given by
  samples on a uniform grid, evaluated exactly for the piecewise-linear
  interpolant (Filon-trapezoid attenuation W(theta) plus endpoint
  corrections, cf. the classic "Fourier integrals using the FFT" recipe);

* the truncated inverse  (1/2 pi) int_{-T}^{T} e^{-jtx} phi(t) dt, discretized
  by the trapezoid rule on a uniform t grid and evaluated at many output
  points at once through a chirp-z transform.

Both avoid any per-(t, x) double loop: the forward uses the 2 pi periodicity
of the node sum (one FFT covers every t on the grid), the inverse uses
scipy.signal.czt.  Direct summation is used below a size threshold where it
is faster than setting up the transforms.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import fft, ifft, next_fast_len

__all__ = [
    "filon_attenuation",
    "cf_of_samples",
    "tgrid_spacing",
    "cf_on_uniform_tgrid",
    "invert_truncated_cf",
]

_DIRECT_WORK_LIMIT = 2e7  # elements of the dense kernel before switching to czt


def filon_attenuation(theta):
    """Attenuation W(theta) and left-endpoint correction alpha0(theta).

    For a density replaced by its piecewise-linear interpolant on a uniform
    grid of step h, the transform at t (theta = t h) is

        h e^{j t x0} [ W(theta) sum_j f_j e^{i j theta}
                       + alpha0 f_0 + conj(alpha0) e^{i (N-1) theta} f_{N-1} ].

    Small-theta branches use truncated Taylor series to avoid cancellation.
    """
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 1e-3
    th = np.where(small, 1.0, theta)  # placeholder to keep divisions finite
    th2 = th * th
    w = 2.0 * (1.0 - np.cos(th)) / th2
    im0 = (th - np.sin(th)) / th2
    t2 = theta * theta
    w_small = 1.0 - t2 / 12.0 + t2 * t2 / 360.0 - t2 * t2 * t2 / 20160.0
    im0_small = theta * (1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0)
    w = np.where(small, w_small, w)
    im0 = np.where(small, im0_small, im0)
    alpha0 = -0.5 * w + 1j * im0
    return w, alpha0


def cf_of_samples(samples, x0, dx, t):
    """Transform int f(x) e^{jtx} dx of uniformly sampled f at arbitrary t.

    Exact for the piecewise-linear interpolant of the samples; reduces to the
    trapezoid rule as t -> 0.  Cost O(len(samples)) per t value, so use
    `cf_on_uniform_tgrid` for large t grids.
    """
    samples = np.asarray(samples, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    theta = t * dx
    n = samples.size
    # node sum S(theta) = sum_j f_j e^{i j theta}, blocked to bound memory
    s = np.empty(theta.size, dtype=complex)
    j = np.arange(n)
    for i0 in range(0, theta.size, 512):
        s[i0:i0 + 512] = np.exp(1j * np.outer(theta[i0:i0 + 512], j)) @ samples
    w, a0 = filon_attenuation(theta)
    out = dx * np.exp(1j * t * x0) * (
        w * s + a0 * samples[0] + np.conj(a0) * np.exp(1j * theta * (n - 1)) * samples[-1]
    )
    return out


def tgrid_spacing(dx, dt_max, n_samples):
    """Largest dt <= dt_max with dt*dx an exact integer fraction of 2 pi.

    The integer `period` makes the node sum of `cf_on_uniform_tgrid`
    2 pi periodic on the t grid, so one FFT covers every node.
    Returns (dt, period).
    """
    period = int(next_fast_len(max(int(np.ceil(2.0 * np.pi / (dt_max * dx))), n_samples)))
    return 2.0 * np.pi / (period * dx), period


def cf_on_uniform_tgrid(samples, x0, dx, period, n_t):
    """Transform of sampled f on the uniform grid t_k = k dt, k = 0..n_t-1.

    `period` must come from `tgrid_spacing` (dt = 2 pi / (period dx)); the
    node sum repeats with that period and a single FFT provides it for all k.
    Returns the complex phi array of length n_t.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    dt = 2.0 * np.pi / (period * dx)
    # S(theta_k) = sum_j f_j e^{+i j theta_k}; fft uses the e^{-i..} kernel,
    # so conjugate (samples are real)
    s_all = np.conj(np.fft.fft(samples, period))
    k = np.arange(n_t)
    theta = k * (2.0 * np.pi / period)
    w, a0 = filon_attenuation(theta)
    s = s_all[k % period]
    phi = dx * np.exp(1j * (k * dt) * x0) * (
        w * s + a0 * samples[0] + np.conj(a0) * np.exp(1j * theta * (n - 1)) * samples[-1]
    )
    return phi


def _bluestein_sum(x, alpha, beta, m):
    """X_i = sum_k x_k exp(-1j (alpha k + beta k i)) for i = 0..m-1.

    Chirp-z evaluation: k i = (k^2 + i^2 - (i-k)^2) / 2 turns the sum into a
    linear convolution done by FFT.  Phases are built with real arithmetic
    (exp of a float phase) which is both faster and no less accurate than
    complex powers.
    """
    k_n = x.size
    k = np.arange(k_n)
    u = x * np.exp(-1j * (alpha * k + 0.5 * beta * k * k))
    nfft = next_fast_len(k_n + m - 1)
    v = np.zeros(nfft, dtype=complex)
    d = np.arange(m)
    v[:m] = np.exp(0.5j * beta * d * d)
    dneg = np.arange(1, k_n)
    v[nfft - k_n + 1:] = np.exp(0.5j * beta * dneg * dneg)[::-1]
    conv = ifft(fft(u, nfft, workers=-1) * fft(v, workers=-1), workers=-1)[:m]
    i = np.arange(m)
    return conv * np.exp(-0.5j * beta * i * i)


def invert_truncated_cf(phi, dt, x_out):
    """Trapezoid discretization of (1/2 pi) int_{-T}^{T} e^{-jtx} phi(t) dt.

    `phi` holds phi(k dt) for k = 0..K; the negative half axis is folded in
    through conjugate symmetry (phi(-t) = conj(phi(t)) for a real density),
    giving  f(x) = (dt/pi) Re sum_k c_k phi_k e^{-j k dt x}  with half weights
    at k = 0 and k = K.  `x_out` must be a uniform, increasing grid.
    """
    phi = np.asarray(phi, dtype=complex)
    x_out = np.asarray(x_out, dtype=float)
    k_n = phi.size
    coeff = phi.copy()
    coeff[0] *= 0.5
    coeff[-1] *= 0.5
    if k_n * x_out.size <= _DIRECT_WORK_LIMIT:
        t = np.arange(k_n) * dt
        vals = np.exp(-1j * np.outer(x_out, t)) @ coeff
    else:
        dh = x_out[1] - x_out[0]
        if not np.allclose(np.diff(x_out), dh, rtol=1e-9, atol=0.0):
            raise ValueError("x_out must be uniformly spaced for the chirp-z path")
        vals = _bluestein_sum(coeff, dt * x_out[0], dt * dh, x_out.size)
    return (dt / np.pi) * np.real(vals)

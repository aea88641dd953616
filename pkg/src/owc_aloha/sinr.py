"""SINR statistics of the reference user, conditioned on the active count.

The analytic pipeline follows the characteristic-function route:

1. the CF of one interferer's SNR, phi(t) = int e^{jtg} f(g) dg over the
   bounded SNR support, evaluated by direct numerical quadrature;
2. the CF of the aggregate interference of n i.i.d. interferers, phi(t)^n;
3. the interference density by truncated inverse-Fourier integration,
   f_I(g) = (1/2 pi) int_{-T}^{T} e^{-jtg} phi(t)^n dt, with ringing from the
   truncation clipped and renormalized under a hard 1% budget;
4. the SINR density of the reference user as a ratio distribution,
   f_SINR(x | U_a) = int lambda f_ref(x lambda) f_lambda(lambda) dlambda,
   where lambda = gamma_I + 1 shifts the interference by the unit noise term,
   and the SINR CDF by integrating the same kernel in the other order.

An independent oracle path computes the interference density by iterated
trapezoid-grid convolution instead of Fourier inversion; the two must agree
and their agreement is part of the validation suite.

The uniform grids of the inversion resolve the SNR density only while the
support ratio snr_max/snr_min stays moderate.  Very narrow beams (large
Lambertian order) stretch the support over many decades and concentrate
almost all interferer mass near zero; for those models the conditional-SINR
machinery sources the interference density from a logarithmic-grid
convolution instead (see `SUPPORT_RATIO_SWITCH`).  Selection is by model
shape only, decided up front, never as failure recovery.

All public functions are pure; per-(model, n, spec) distribution results are
memoized in a read-mostly cache that is safe for concurrent readers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import fourier
from .channel import SystemModel, snr_cdf_closed_form, snr_pdf
from .errors import QuadratureError
from .tabulated import TabulatedDistribution

__all__ = [
    "QuadratureSpec",
    "single_interferer_cf",
    "interference_cf",
    "interference_pdf",
    "interference_pdf_convolution",
    "conditional_sinr_pdf",
    "conditional_sinr_cdf",
]

DEFAULT_GRID_POINTS = 2048
# |phi(t)|^n below this at the truncation boundary (adaptive rule)
INVERSION_TAIL = 1e-8
# t-grid nodes per period of e^{-jtg} at the largest |g| of interest
OSC_NODES_PER_PERIOD = 8
# clipping + mass-defect budget of the inversion
RENORM_BUDGET = 1e-2
# snr_max/snr_min beyond which uniform-grid inversion cannot resolve the
# density head and the log-grid convolution path takes over
SUPPORT_RATIO_SWITCH = 100.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for CF evaluation and Fourier inversion.

    cf_nodes bounds the quadrature nodes of one CF evaluation and sets the
    sampling of the density for the inversion's forward transform.
    inversion_t_max caps the truncation time T (the adaptive rule may stop
    earlier); inversion_nodes bounds the t-grid size; lambda_nodes sizes the
    outer integral of the ratio distribution.
    """

    cf_nodes: int = 4096
    inversion_t_max: float = 5e4
    inversion_nodes: int = 8_000_000
    lambda_nodes: int = 2048
    rel_tol: float = 1e-6

    def __post_init__(self):
        for name in ("cf_nodes", "inversion_nodes", "lambda_nodes"):
            if getattr(self, name) < 16:
                raise ValueError(f"{name} must be >= 16, got {getattr(self, name)}")
        if self.inversion_t_max <= 0:
            raise ValueError(f"inversion_t_max must be > 0, got {self.inversion_t_max}")
        if not 0.0 < self.rel_tol <= 1e-2:
            raise ValueError(f"rel_tol must be in (0, 1e-2], got {self.rel_tol}")


# ---------------------------------------------------------------------------
# characteristic function of a single interferer
# ---------------------------------------------------------------------------

_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = leggauss(_GL_ORDER)
_MAX_PHASE_PER_PANEL = 6.0   # GL-16 integrates e^{j phi u} to ~1e-10 up to here
_BASE_PANELS = 24


def _panel_edges(lo, hi, t, max_panels):
    """Geometric base panels refined so each spans <= _MAX_PHASE_PER_PANEL.

    The split counts are scaled down proportionally when the ideal refinement
    would exceed max_panels (the convergence loop then reports the shortfall).
    """
    n_base = min(_BASE_PANELS, max_panels)
    base = np.geomspace(lo, hi, n_base + 1)
    splits = np.maximum(
        1, np.ceil(np.abs(t) * np.diff(base) / _MAX_PHASE_PER_PANEL).astype(int)
    )
    total = int(splits.sum())
    if total > max_panels:
        splits = np.maximum(1, (splits * (max_panels / total)).astype(int))
    edges = [lo]
    for a, b, s in zip(base[:-1], base[1:], splits):
        edges.extend(np.linspace(a, b, s + 1)[1:])
    return np.asarray(edges)


def _cf_gl(model, t, edges):
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * _GL_NODES).ravel()
    w = (half[:, None] * _GL_WEIGHTS).ravel()
    return np.sum(w * snr_pdf(model, x) * np.exp(1j * t * x))


def single_interferer_cf(model: SystemModel, t: float, spec: QuadratureSpec | None = None) -> complex:
    """CF of the SNR of one interfering user by composite Gauss-Legendre.

    Self-refines (panel doubling) until successive estimates agree to
    spec.rel_tol; raises QuadratureError with the achieved estimate if the
    node budget runs out first.
    """
    spec = spec or QuadratureSpec()
    model._require_full_fov()
    lo, hi = model.snr_min, model.snr_max
    edges = _panel_edges(lo, hi, t, max(spec.cf_nodes // _GL_ORDER, 1))
    val = _cf_gl(model, t, edges)
    while True:
        fine_edges = np.unique(np.concatenate([edges, 0.5 * (edges[1:] + edges[:-1])]))
        fine = _cf_gl(model, t, fine_edges)
        err = abs(fine - val)
        if err <= spec.rel_tol * max(abs(fine), 1e-6):
            return complex(fine)
        if (fine_edges.size - 1) * 2 * _GL_ORDER > spec.cf_nodes:
            raise QuadratureError(
                f"CF quadrature at t={t:g} did not reach rel_tol={spec.rel_tol:g} "
                f"within cf_nodes={spec.cf_nodes} (achieved {err:.3e})",
                error_estimate=err,
            )
        edges, val = fine_edges, fine


def interference_cf(model: SystemModel, t: float, n_interferers: int,
                    spec: QuadratureSpec | None = None) -> complex:
    """CF of the aggregate interference of n i.i.d. interferers: phi(t)^n."""
    if n_interferers < 0:
        raise ValueError(f"n_interferers must be >= 0, got {n_interferers}")
    if n_interferers == 0:
        return complex(1.0)  # empty sum, gamma_I identically 0
    return complex(single_interferer_cf(model, t, spec) ** n_interferers)


# ---------------------------------------------------------------------------
# interference density: truncated Fourier inversion (production path)
# ---------------------------------------------------------------------------

def _density_samples(model, n_points):
    lo, hi = model.snr_min, model.snr_max
    grid = np.linspace(lo, hi, n_points)
    return grid, snr_pdf(model, grid)


def _truncation_time(samples, lo, dg, n_pow, dt, cap):
    """Smallest probe time beyond which |phi|^n stays under INVERSION_TAIL."""
    probes = np.geomspace(max(8.0 * dt, 1e-9), cap, 96)
    mag = np.abs(fourier.cf_of_samples(samples, lo, dg, probes)) ** n_pow
    tail_max = np.maximum.accumulate(mag[::-1])[::-1]
    below = tail_max < INVERSION_TAIL
    if not below.any():
        return cap
    return min(cap, 1.15 * probes[int(np.argmax(below))])


def interference_pdf(model: SystemModel, n_interferers: int,
                     spec: QuadratureSpec | None = None) -> TabulatedDistribution:
    """Density of the sum of n i.i.d. interferer SNRs by CF inversion.

    Support [n snr_min, n snr_max], tabulated on a uniform grid.  The
    truncation time adapts so |phi|^n < 1e-8 at the boundary, capped by
    spec.inversion_t_max; the t grid keeps >= 8 nodes per oscillation period
    at n*snr_max.  Values at the two support edges are one-sided limits
    (the symmetric truncated kernel converges to the half jump there).
    Negative ringing is clipped and the result renormalized; a correction
    beyond 1% raises QuadratureError.
    """
    spec = spec or QuadratureSpec()
    if n_interferers < 1:
        raise ValueError(f"n_interferers must be >= 1, got {n_interferers}")
    model._require_full_fov()
    n = n_interferers
    lo, hi = model.snr_min, model.snr_max
    grid_f, samples = _density_samples(model, max(spec.cf_nodes, 1024))
    dg = grid_f[1] - grid_f[0]

    dt_target = 2.0 * np.pi / (OSC_NODES_PER_PERIOD * n * hi)
    t_max = _truncation_time(samples, lo, dg, n, dt_target, spec.inversion_t_max)
    direct = (t_max / dt_target) * samples.size <= 2e7
    if direct:
        dt, period = dt_target, None
    else:
        dt, period = fourier.tgrid_spacing(dg, dt_target, samples.size)
    n_t = max(int(np.ceil(t_max / dt)) + 1, 48)
    if n_t > spec.inversion_nodes:
        raise QuadratureError(
            f"inversion needs {n_t} t-grid nodes (> inversion_nodes="
            f"{spec.inversion_nodes}); raise the budget or lower inversion_t_max",
            error_estimate=float(n_t),
        )
    if direct:
        # short t grid: evaluate the transform directly, no FFT machinery
        phi = fourier.cf_of_samples(samples, lo, dg, np.arange(n_t) * dt)
    else:
        phi = fourier.cf_on_uniform_tgrid(samples, lo, dg, period, n_t)
    phi_pow = phi if n == 1 else phi**n

    out_grid = np.linspace(n * lo, n * hi, DEFAULT_GRID_POINTS)
    pdf = fourier.invert_truncated_cf(phi_pow, dt, out_grid)
    # boundary nodes hold half the one-sided limit under symmetric truncation
    pdf[0] *= 2.0
    pdf[-1] *= 2.0

    mass_raw = np.trapezoid(pdf, out_grid)
    clipped = mass_raw - np.trapezoid(np.maximum(pdf, 0.0), out_grid)
    pdf = np.maximum(pdf, 0.0)
    mass = np.trapezoid(pdf, out_grid)
    correction = abs(1.0 - mass) + abs(clipped)
    if correction >= RENORM_BUDGET:
        raise QuadratureError(
            f"inversion renormalization correction {correction:.3e} >= "
            f"{RENORM_BUDGET}; increase inversion_t_max / inversion_nodes",
            error_estimate=correction,
        )
    pdf /= mass
    return TabulatedDistribution(n * lo, n * hi, out_grid, pdf)


# ---------------------------------------------------------------------------
# interference density: iterated grid convolution (oracle path)
# ---------------------------------------------------------------------------

def interference_pdf_convolution(model: SystemModel, n_interferers: int,
                                 spec: QuadratureSpec | None = None) -> TabulatedDistribution:
    """Density of the n-fold SNR sum by iterated trapezoid-grid convolution.

    Independent of the CF path: the closed-form density is sampled on a
    uniform grid and convolved with itself n-1 times (trapezoid end weights
    factor across the convolution).  Same support and normalization contract
    as `interference_pdf`.
    """
    spec = spec or QuadratureSpec()
    if n_interferers < 1:
        raise ValueError(f"n_interferers must be >= 1, got {n_interferers}")
    model._require_full_fov()
    n = n_interferers
    lo, hi = model.snr_min, model.snr_max
    grid_f, samples = _density_samples(model, spec.cf_nodes)
    h = grid_f[1] - grid_f[0]
    if abs(1.0 - np.trapezoid(samples, grid_f)) >= RENORM_BUDGET:
        raise QuadratureError(
            f"convolution grid too coarse: {spec.cf_nodes} nodes leave a mass "
            f"defect of {abs(1.0 - np.trapezoid(samples, grid_f)):.3e}",
            error_estimate=abs(1.0 - np.trapezoid(samples, grid_f)),
        )
    if n == 1:
        return TabulatedDistribution(lo, hi, grid_f, samples)
    tapered = samples.copy()
    tapered[0] *= 0.5
    tapered[-1] *= 0.5
    acc = tapered
    for _ in range(n - 1):
        acc = np.convolve(acc, tapered) * h
    # the overlap interval degenerates at the support edges, where the
    # convolution is exactly zero; the raw discrete sum leaves an O(h) spur
    acc[0] = 0.0
    acc[-1] = 0.0
    out_grid = n * lo + np.arange(acc.size) * h
    out_grid[-1] = n * hi  # guard accumulated rounding at the far edge
    mass = np.trapezoid(acc, out_grid)
    if abs(1.0 - mass) >= RENORM_BUDGET:
        raise QuadratureError(
            f"convolution grid too coarse: mass defect {abs(1.0 - mass):.3e}",
            error_estimate=abs(1.0 - mass),
        )
    return TabulatedDistribution(n * lo, n * hi, out_grid, acc / mass)


# ---------------------------------------------------------------------------
# interference density on a logarithmic grid (wide-support models)
# ---------------------------------------------------------------------------

def _loggrid_interference_pdf(model, n_interferers, spec=None, n_grid=2048):
    """Interference density by convolution on log-spaced grids.

    One step convolves the (n-1)-interferer density (through the shared
    per-(model, n) cache, so chains reuse every intermediate) with the
    closed-form single-interferer density.  The convolution integral is split
    at gamma = s/n, each half integrated on a grid logarithmic in its own
    offset variable; this keeps the near-singular density heads resolved even
    when the support spans many decades.  Each step is renormalized (per-step
    defect is checked) so mass errors do not compound along the chain.
    Accuracy is at the CDF level (~1e-3), which is what the outage integrals
    need.
    """
    spec = spec or QuadratureSpec()
    lo, hi = model.snr_min, model.snr_max
    if n_interferers == 1:
        grid = np.geomspace(lo, hi, 4 * n_grid)
        return TabulatedDistribution(lo, hi, grid, snr_pdf(model, grid))
    prev = _interference_tab(model, n_interferers - 1, spec)
    k = n_interferers - 1
    k_lo, k_hi = k * lo, k * hi

    def pdf_prev(x):
        return np.interp(x, prev.grid, prev.pdf_values, left=0.0, right=0.0)

    frac = np.linspace(0.0, 1.0, 768)[None, :]
    s = np.geomspace(n_interferers * lo, n_interferers * hi, n_grid)
    out = np.zeros_like(s)
    for i0 in range(0, s.size, 256):
        sc = s[i0:i0 + 256][:, None]
        # gamma in [max(lo, s - k hi), min(hi, s - k lo)], split at c = s/n;
        # both halves use grids logarithmic in the offset from their own
        # support edge so the density heads stay resolved
        lo1 = np.maximum(lo, sc - k_hi)
        split = np.maximum(sc / (k + 1.0), lo1)
        up1 = np.maximum(np.minimum(np.minimum(hi, sc - k_lo), split),
                         lo1 * (1.0 + 1e-12))
        g1 = lo1 * np.exp(frac * np.log(up1 / lo1))
        part1 = np.trapezoid(pdf_prev(sc - g1) * snr_pdf(model, g1), g1, axis=1)
        # v = s - gamma in [max(k lo, s - hi), s - split]
        off_lo = np.maximum(np.maximum(k_lo, sc - hi) - k_lo, 1e-9 * lo)
        off_hi = np.maximum(sc - split - k_lo, off_lo * (1.0 + 1e-12))
        off = off_lo * np.exp(frac * np.log(off_hi / off_lo))
        v = k_lo + off
        part2 = np.trapezoid(pdf_prev(v) * snr_pdf(model, sc - v), v, axis=1)
        out[i0:i0 + 256] = part1 + part2
    mass = np.trapezoid(out, s)
    if abs(1.0 - mass) >= RENORM_BUDGET:
        raise QuadratureError(
            f"log-grid convolution step defect {abs(1 - mass):.3e}",
            error_estimate=abs(1.0 - mass),
        )
    return TabulatedDistribution(
        n_interferers * lo, n_interferers * hi, s, out / mass
    )


# ---------------------------------------------------------------------------
# conditional SINR distribution (ratio against lambda = gamma_I + 1)
# ---------------------------------------------------------------------------

def _support_ratio(model):
    return model.snr_max / model.snr_min


@functools.lru_cache(maxsize=128)
def _interference_tab(model: SystemModel, n_interferers: int, spec: QuadratureSpec):
    """Interference density used by the conditional-SINR machinery.

    Moderate support ratios use the CF-inversion path; wide supports use the
    log-grid convolution (uniform grids cannot resolve the density head
    there).  The single-interferer case is the closed-form density itself.
    """
    if n_interferers == 1:
        lo, hi = model.snr_min, model.snr_max
        grid = np.geomspace(lo, hi, spec.lambda_nodes)
        return TabulatedDistribution(lo, hi, grid, snr_pdf(model, grid))
    if _support_ratio(model) <= SUPPORT_RATIO_SWITCH:
        return interference_pdf(model, n_interferers, spec)
    return _loggrid_interference_pdf(model, n_interferers, spec)


@functools.lru_cache(maxsize=32)
def _snr_cdf_fine(model: SystemModel):
    """Cumulative trapezoid of the closed-form SNR density on a fine log grid.

    This is the numerically integrated single-user CDF used by the n = 1
    conditional path; it is deliberately independent of the closed-form
    antiderivative so the two can be compared as an oracle check.
    """
    grid = np.geomspace(model.snr_min, model.snr_max, 1 << 15)
    pdf = snr_pdf(model, grid)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))])
    return grid, cdf


def _lambda_tab(model, n_active, spec):
    """Density of lambda = gamma_I + 1 for n_active - 1 interferers."""
    tab = _interference_tab(model, n_active - 1, spec)
    return tab.grid + 1.0, tab.pdf_values


@functools.lru_cache(maxsize=64)
def conditional_sinr_pdf(model: SystemModel, n_active: int,
                         spec: QuadratureSpec | None = None) -> TabulatedDistribution:
    """Density of SINR = gamma_ref / (gamma_I + 1) given n_active users.

    n_active = 1 is interference-free (lambda identically 1) and returns the
    single-user SNR density.  For n_active >= 2 the ratio-distribution
    integral runs over lambda in [(n-1) snr_min + 1, (n-1) snr_max + 1], with
    the reference-user factor nonzero only where x*lambda falls inside the
    SNR support.  The result integrates to 1 within 1e-3.
    """
    spec = spec or QuadratureSpec()
    if n_active < 1:
        raise ValueError(f"n_active must be >= 1, got {n_active}")
    model._require_full_fov()
    lo, hi = model.snr_min, model.snr_max
    if n_active == 1:
        grid = np.geomspace(lo, hi, DEFAULT_GRID_POINTS)
        return TabulatedDistribution(lo, hi, grid, snr_pdf(model, grid))
    lam, f_lam = _lambda_tab(model, n_active, spec)
    x_lo = lo / lam[-1]
    x_hi = hi / lam[0]
    x = np.geomspace(x_lo, x_hi, DEFAULT_GRID_POINTS)
    pdf = np.empty_like(x)
    kernel = lam * f_lam
    for i0 in range(0, x.size, 256):
        xc = x[i0:i0 + 256][:, None]
        pdf[i0:i0 + 256] = np.trapezoid(kernel * snr_pdf(model, xc * lam), lam, axis=1)
    return TabulatedDistribution(x_lo, x_hi, x, pdf)


def conditional_sinr_cdf(model: SystemModel, n_active: int, gamma_th: float,
                         spec: QuadratureSpec | None = None) -> float:
    """P[SINR <= gamma_th | n_active], clamped to [0, 1].

    Same ratio integral as `conditional_sinr_pdf` with the integration order
    swapped: F(g | U_a) = int f_lambda(l) F_ref(g l) dl, which evaluates the
    CDF without tabulating the density first.  For n_active = 1 the CDF comes
    from fine-grid numerical integration of the SNR density.
    """
    spec = spec or QuadratureSpec()
    if n_active < 1:
        raise ValueError(f"n_active must be >= 1, got {n_active}")
    if gamma_th <= 0:
        raise ValueError(f"gamma_th must be > 0, got {gamma_th}")
    model._require_full_fov()
    if n_active == 1:
        grid, cdf = _snr_cdf_fine(model)
        if gamma_th <= grid[0]:
            return 0.0
        if gamma_th >= grid[-1]:
            return 1.0
        return float(np.interp(gamma_th, grid, cdf))
    lam, f_lam = _lambda_tab(model, n_active, spec)
    val = np.trapezoid(f_lam * snr_cdf_closed_form(model, gamma_th * lam), lam)
    return float(np.clip(val, 0.0, 1.0))

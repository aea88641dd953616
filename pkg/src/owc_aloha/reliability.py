"""Outage probability under Bernoulli arrivals and the classical-SA baseline.

The conditional outage of the reference user given n active users is the
conditional SINR CDF at the threshold (capture mode) or the all-collisions-
destructive baseline (classical mode).  The unconditional outage mixes the
conditional values against the binomial law of the active count, either as
the literal partial sum over n >= 1 ('paper' mixture) or normalized by
P[U_a >= 1] ('conditional' mixture).  Parameter sweeps rebuild the derived
model constants row by row and optionally attach Monte Carlo estimates.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .channel import SystemModel, build_model, snr_cdf_closed_form
from .montecarlo import McConfig, McEstimate, simulate_unconditional_outage
from .sinr import QuadratureSpec, conditional_sinr_cdf

__all__ = [
    "TrafficModel",
    "OutageQuery",
    "SweepRow",
    "SweepResult",
    "conditional_outage",
    "binomial_pmf",
    "unconditional_outage",
    "sweep",
]

BINOMIAL_TAIL_CUTOFF = 1e-9  # pmf mass allowed outside the summation window


@dataclass(frozen=True)
class TrafficModel:
    population: int
    activation_prob: float

    def __post_init__(self):
        if self.population < 1:
            raise ValueError(f"population must be >= 1, got {self.population}")
        if not 0.0 <= self.activation_prob <= 1.0:
            raise ValueError(
                f"activation_prob must be in [0, 1], got {self.activation_prob}"
            )


@dataclass(frozen=True)
class OutageQuery:
    threshold: float            # linear SINR
    mode: str = "capture"       # capture | classical
    mixture_mode: str = "paper"  # paper | conditional

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")
        if self.mode not in ("capture", "classical"):
            raise ValueError(f"mode must be 'capture' or 'classical', got {self.mode!r}")
        if self.mixture_mode not in ("paper", "conditional"):
            raise ValueError(
                f"mixture_mode must be 'paper' or 'conditional', got {self.mixture_mode!r}"
            )


@dataclass(frozen=True)
class SweepRow:
    param_value: float
    p_out_capture: float | None
    p_out_classical: float | None
    mc_value: float | None = None
    mc_half_width: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    rows: tuple


def conditional_outage(model: SystemModel, n_active: int, query: OutageQuery,
                       spec: QuadratureSpec | None = None) -> float:
    """P[SINR < threshold | n_active active users] for the reference user.

    Classical mode decodes only singleton slots, where the user still has to
    clear the threshold against noise alone; any collision is an outage.
    """
    if n_active < 1:
        raise ValueError(f"n_active must be >= 1, got {n_active}")
    if query.mode == "classical":
        if n_active == 1:
            return float(snr_cdf_closed_form(model, query.threshold))
        return 1.0
    return conditional_sinr_cdf(model, n_active, query.threshold, spec)


def binomial_pmf(traffic: TrafficModel, n: int) -> float:
    """P[U_a = n] for U_a ~ Binomial(population, activation_prob).

    Computed in log space so populations up to ~1e5 stay finite.
    """
    u, p = traffic.population, traffic.activation_prob
    if not 0 <= n <= u:
        raise ValueError(f"n must be in [0, {u}], got {n}")
    if p == 0.0:
        return 1.0 if n == 0 else 0.0
    if p == 1.0:
        return 1.0 if n == u else 0.0
    log_pmf = (
        gammaln(u + 1) - gammaln(n + 1) - gammaln(u - n + 1)
        + n * math.log(p) + (u - n) * math.log1p(-p)
    )
    return float(math.exp(log_pmf))


def _pmf_window(traffic: TrafficModel):
    """Indices [n_lo, n_hi] of the binomial pmf with tails below the cutoff."""
    u, p = traffic.population, traffic.activation_prob
    ns = np.arange(u + 1)
    if p == 0.0 or p == 1.0:
        pmf = np.zeros(u + 1)
        pmf[u if p == 1.0 else 0] = 1.0
    else:
        pmf = np.exp(
            gammaln(u + 1) - gammaln(ns + 1) - gammaln(u - ns + 1)
            + ns * math.log(p) + (u - ns) * math.log1p(-p)
        )
    tail_from = 1.0 - np.cumsum(pmf) + pmf      # mass at or above n
    keep = tail_from >= BINOMIAL_TAIL_CUTOFF
    n_hi = int(np.max(np.nonzero(keep))) if keep.any() else u
    # skip the lower tail while its total mass stays under the cutoff
    n_lo = 1
    head = 0.0
    for n in range(1, u + 1):
        if head + pmf[n] > BINOMIAL_TAIL_CUTOFF:
            n_lo = n
            break
        head += pmf[n]
        n_lo = n + 1
    return max(1, n_lo), max(n_hi, 1), pmf


def unconditional_outage(model: SystemModel, traffic: TrafficModel,
                         query: OutageQuery,
                         spec: QuadratureSpec | None = None) -> float:
    """Mixture of conditional outages against the binomial active count.

    'paper' mixture: sum_{n>=1} P_out(n) P[U_a = n] (empty slots excluded
    from the sum and not renormalized).  'conditional' divides the same sum
    by 1 - (1 - p_a)^U.  The series is truncated where the skipped binomial
    mass is below 1e-9 (conditional outages are bounded by 1, so the
    truncation error is below the same cutoff).
    """
    if traffic.activation_prob == 0.0:
        return 0.0
    n_lo, n_hi, pmf = _pmf_window(traffic)
    total = 0.0
    for n in range(n_lo, n_hi + 1):
        if pmf[n] == 0.0:
            continue
        total += pmf[n] * conditional_outage(model, n, query, spec)
    if query.mixture_mode == "conditional":
        occupancy = -math.expm1(traffic.population * math.log1p(-traffic.activation_prob))
        total = total / occupancy if occupancy > 0 else 0.0
    return float(min(total, 1.0))


_AXES = ("users", "semi_angle", "radius", "activation_prob")


def _rebuild(model: SystemModel, traffic: TrafficModel, axis: str, value):
    """New (model, traffic) with one parameter replaced and derived constants
    recomputed (semi-angle rebuilds m and the aggregate factor; radius
    rebuilds the SNR support)."""
    if axis == "users":
        v = int(value)
        if v != value:
            raise ValueError(f"users axis needs integer values, got {value!r}")
        return model, dataclasses.replace(traffic, population=v)
    if axis == "activation_prob":
        return model, dataclasses.replace(traffic, activation_prob=float(value))
    if axis == "semi_angle":
        new = build_model(
            semi_angle=float(value),
            fov=model.pd.field_of_view,
            area=model.pd.area,
            responsivity=model.pd.responsivity,
            filter_gain=model.pd.filter_gain,
            lens_refractive_index=model.pd.lens_refractive_index,
            eta=model.power.oe_conversion,
            noise_psd=model.power.noise_psd,
            bandwidth=model.power.bandwidth,
            tx_power=model.power.tx_optical_power,
            height=model.cell.height,
            radius=model.cell.radius,
        )
        return new, traffic
    if axis == "radius":
        new = SystemModel(
            led=model.led,
            pd=model.pd,
            cell=dataclasses.replace(model.cell, radius=float(value)),
            power=model.power,
        )
        return new, traffic
    raise ValueError(f"axis must be one of {_AXES}, got {axis!r}")


def sweep(model: SystemModel, traffic: TrafficModel, query: OutageQuery,
          axis: str, values, spec: QuadratureSpec | None = None,
          mc: McConfig | None = None) -> SweepResult:
    """Outage probability versus one swept parameter.

    One row per value, capture and classical outage side by side; Monte
    Carlo columns (capture-path check, stream_id = row index) are filled
    when `mc` is given.  A failing row records its error string and the
    sweep continues; values must be strictly increasing.
    """
    values = list(values)
    if not values:
        raise ValueError("values must be nonempty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("sweep values must be strictly increasing")
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {_AXES}, got {axis!r}")
    rows = []
    for i, value in enumerate(values):
        try:
            row_model, row_traffic = _rebuild(model, traffic, axis, value)
            p_cap = unconditional_outage(
                row_model, row_traffic, dataclasses.replace(query, mode="capture"), spec
            )
            p_cls = unconditional_outage(
                row_model, row_traffic, dataclasses.replace(query, mode="classical"), spec
            )
            mc_value = mc_hw = None
            if mc is not None:
                est = simulate_unconditional_outage(
                    row_model, row_traffic, query.threshold, "capture",
                    dataclasses.replace(mc, stream_id=mc.stream_id + i),
                    mixture_mode=query.mixture_mode,
                )
                mc_value, mc_hw = est.value, est.half_width_95
            rows.append(SweepRow(float(value), p_cap, p_cls, mc_value, mc_hw))
        except Exception as exc:  # record the row failure, keep sweeping
            rows.append(SweepRow(float(value), None, None, error=str(exc)))
    return SweepResult(axis=axis, rows=tuple(rows))

"""Independent stochastic oracle for the analytic SINR/outage pipeline.

Slots are i.i.d.: every trial draws user positions afresh, activity is
Bernoulli per user, and the reference user is the last active index (users
are exchangeable, so this matches picking one active user at random).  The
generator is counter-based (Philox) keyed by (seed, stream_id), which makes
shards provably non-overlapping and estimates bit-identical for identical
configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemModel

__all__ = [
    "McConfig",
    "McEstimate",
    "sample_user_snr",
    "simulate_conditional_outage",
    "simulate_unconditional_outage",
    "combine_estimates",
]

_CHUNK_DRAWS = 8_000_000  # gamma draws per vectorized block


@dataclass(frozen=True)
class McConfig:
    trials: int = 1_000_000
    seed: int = 1
    stream_id: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class McEstimate:
    """Proportion estimate with normal-approximation 95% half-width.

    trials = 0 marks a degenerate estimate (no slots matched the
    conditioning event); its half-width is NaN.
    """

    value: float
    half_width_95: float
    trials: int

    @staticmethod
    def from_counts(successes: int, trials: int) -> "McEstimate":
        if trials == 0:
            return McEstimate(0.0, float("nan"), 0)
        p = successes / trials
        return McEstimate(p, 1.96 * math.sqrt(p * (1.0 - p) / trials), trials)


def combine_estimates(estimates) -> McEstimate:
    """Pool shard estimates (deterministic reduction in the given order)."""
    total = sum(e.trials for e in estimates)
    hits = sum(round(e.value * e.trials) for e in estimates)
    return McEstimate.from_counts(hits, total)


def _draw_snr(model: SystemModel, rng: np.random.Generator, size) -> np.ndarray:
    # r = R sqrt(u)  =>  r^2 + L^2 = L^2 + R^2 u, so one uniform per draw
    u = rng.random(size)
    m = model.led.lambertian_order
    a = model.power.snr_scale * model.aggregate_factor**2
    return a * (model.cell.height**2 + model.cell.radius**2 * u) ** (-(m + 3.0))


def sample_user_snr(model: SystemModel, rng: np.random.Generator) -> float:
    """One SNR draw of a uniformly placed user (radial density 2r/R^2)."""
    model._require_full_fov()
    return float(_draw_snr(model, rng, ()))


def simulate_conditional_outage(model: SystemModel, n_active: int, gamma_th: float,
                                mc: McConfig) -> McEstimate:
    """Empirical P[SINR < gamma_th | n_active] over mc.trials slots.

    The reference user is the last of the n_active i.i.d. draws; its SINR is
    gamma_ref / (sum of the others + 1).
    """
    if n_active < 1:
        raise ValueError(f"n_active must be >= 1, got {n_active}")
    model._require_full_fov()
    rng = mc.generator()
    chunk = max(1, _CHUNK_DRAWS // n_active)
    outages = 0
    done = 0
    while done < mc.trials:
        size = min(chunk, mc.trials - done)
        g = _draw_snr(model, rng, (size, n_active))
        ref = g[:, -1]
        interference = g.sum(axis=1) - ref
        outages += int(np.count_nonzero(ref < gamma_th * (interference + 1.0)))
        done += size
    return McEstimate.from_counts(outages, mc.trials)


def _simulate_slots(model, traffic, gamma_th, mc):
    """Per-slot capture and classical outage counts from one common stream.

    Returns (capture_outages, classical_outages, occupied_slots).  Slots are
    grouped by their active count so each group is one vectorized block;
    group order is deterministic, so results are bit-identical for identical
    (seed, stream_id, trials, inputs).
    """
    rng = mc.generator()
    u_a = rng.binomial(traffic.population, traffic.activation_prob, mc.trials)
    cap = 0
    cls = 0
    occupied = 0
    counts = np.bincount(u_a)
    for n in range(1, counts.size):
        c_n = int(counts[n])
        if c_n == 0:
            continue
        occupied += c_n
        done = 0
        chunk = max(1, _CHUNK_DRAWS // n)
        while done < c_n:
            size = min(chunk, c_n - done)
            g = _draw_snr(model, rng, (size, n))
            ref = g[:, -1]
            interference = g.sum(axis=1) - ref
            n_out = int(np.count_nonzero(ref < gamma_th * (interference + 1.0)))
            cap += n_out
            if n == 1:
                cls += n_out
            done += size
        if n >= 2:
            cls += c_n  # classical SA: any collision slot is lost
    return cap, cls, occupied


def simulate_unconditional_outage(model: SystemModel, traffic, gamma_th: float,
                                  mode: str, mc: McConfig,
                                  mixture_mode: str = "paper") -> McEstimate:
    """Empirical unconditional outage under Bernoulli arrivals.

    mode 'capture' decodes the reference user whenever its SINR clears the
    threshold; 'classical' decodes only singleton slots whose SNR clears it.
    mixture_mode 'paper' averages the outage indicator over all slots with
    empty slots counting as non-outage (the literal mixture over U_a >= 1);
    'conditional' averages over occupied slots only.  With no occupied slot
    the conditional estimate is degenerate (value 0, zero trials).
    """
    if mode not in ("capture", "classical"):
        raise ValueError(f"mode must be 'capture' or 'classical', got {mode!r}")
    if mixture_mode not in ("paper", "conditional"):
        raise ValueError(f"mixture_mode must be 'paper' or 'conditional', got {mixture_mode!r}")
    model._require_full_fov()
    cap, cls, occupied = _simulate_slots(model, traffic, gamma_th, mc)
    hits = cap if mode == "capture" else cls
    denominator = mc.trials if mixture_mode == "paper" else occupied
    return McEstimate.from_counts(hits, denominator)

"""Indoor optical wireless cell geometry and the Lambertian line-of-sight channel.

A single photodetector access point sits at height L above a circular plane
of radius R on which the IoT transmitters are uniformly scattered.  With the
detector surface parallel to the plane, the DC channel gain from a user at
radial distance r reduces to

    h(r) = X / (r^2 + L^2)^((m+3)/2),
    X    = A_r (m+1) R_r / (2 pi) * T_s * g * L^(m+1),

where m is the Lambertian order of the LED and g the optical concentrator
gain.  The electrical SNR of that user is gamma = mu * h^2 with
mu = (P_t eta)^2 / sigma_n^2.  Because user positions are random, h and gamma
are random variables; their closed-form densities and the SNR CDF are
implemented here and serve as the single-user reference for every other
module.

All quantities are SI internally (m^2, W, Hz, radians); unit conversion from
config files (cm^2, mW, kHz, degrees) happens in :mod:`owc_aloha.config`.
All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LedTransmitter",
    "PhotoDetector",
    "CellGeometry",
    "PowerNoiseParams",
    "SystemModel",
    "lambertian_order",
    "channel_gain",
    "snr_of_gain",
    "radial_pdf",
    "snr_pdf",
    "snr_cdf_closed_form",
    "build_model",
    "default_model",
]


def lambertian_order(semi_angle: float) -> float:
    """Lambertian order m = -ln 2 / ln(cos(semi_angle)).

    ``semi_angle`` is the half-illuminance semi-angle of the LED in radians
    and must lie strictly inside (0, pi/2).  m is positive and decreases as
    the beam widens (60 deg -> m = 1, 45 deg -> m = 2).
    """
    if not 0.0 < semi_angle < math.pi / 2:
        raise ValueError(
            f"semi_angle must be in (0, pi/2) radians, got {semi_angle!r}"
        )
    return -math.log(2.0) / math.log(math.cos(semi_angle))


@dataclass(frozen=True)
class LedTransmitter:
    """LED source described by its half-illuminance semi-angle (radians)."""

    semi_angle_half_power: float
    lambertian_order: float = dataclasses.field(init=False)

    def __post_init__(self):
        m = lambertian_order(self.semi_angle_half_power)
        object.__setattr__(self, "lambertian_order", m)


@dataclass(frozen=True)
class PhotoDetector:
    """Photodetector with optical filter and ideal non-imaging concentrator.

    The concentrator gain is g = zeta^2 / sin^2(Psi) for incidence angles
    within the field of view Psi and zero outside.
    """

    area: float                 # m^2
    responsivity: float         # A/W
    filter_gain: float = 1.0
    lens_refractive_index: float = 1.5
    field_of_view: float = math.pi / 2   # radians

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError(f"area must be > 0, got {self.area}")
        if self.responsivity <= 0:
            raise ValueError(f"responsivity must be > 0, got {self.responsivity}")
        if self.filter_gain <= 0:
            raise ValueError(f"filter_gain must be > 0, got {self.filter_gain}")
        if not 0.0 < self.field_of_view <= math.pi / 2:
            raise ValueError(
                f"field_of_view must be in (0, pi/2] radians, got {self.field_of_view}"
            )

    @property
    def concentrator_gain(self) -> float:
        return self.lens_refractive_index**2 / math.sin(self.field_of_view) ** 2


@dataclass(frozen=True)
class CellGeometry:
    """Coverage disk of radius `radius` with the AP at height `height` (m)."""

    radius: float
    height: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if self.height <= 0:
            raise ValueError(f"height must be > 0, got {self.height}")


@dataclass(frozen=True)
class PowerNoiseParams:
    """Transmit power, electro-optical conversion and receiver noise.

    noise_variance = N_0 B and snr_scale mu = (P_t eta)^2 / noise_variance
    are derived on construction.
    """

    tx_optical_power: float     # W
    oe_conversion: float        # dimensionless eta
    noise_psd: float            # W/Hz
    bandwidth: float            # Hz
    noise_variance: float = dataclasses.field(init=False)
    snr_scale: float = dataclasses.field(init=False)

    def __post_init__(self):
        for name in ("tx_optical_power", "oe_conversion", "noise_psd", "bandwidth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        sigma2 = self.noise_psd * self.bandwidth
        object.__setattr__(self, "noise_variance", sigma2)
        object.__setattr__(
            self, "snr_scale", (self.tx_optical_power * self.oe_conversion) ** 2 / sigma2
        )


@dataclass(frozen=True)
class SystemModel:
    """Full cell parameterization with the derived channel/SNR constants.

    aggregate_factor is the X prefactor above; gain and SNR support bounds
    follow from evaluating h(r) at r = 0 and r = R.
    """

    led: LedTransmitter
    pd: PhotoDetector
    cell: CellGeometry
    power: PowerNoiseParams
    aggregate_factor: float = dataclasses.field(init=False)
    gain_min: float = dataclasses.field(init=False)
    gain_max: float = dataclasses.field(init=False)
    snr_min: float = dataclasses.field(init=False)
    snr_max: float = dataclasses.field(init=False)

    def __post_init__(self):
        m = self.led.lambertian_order
        L = self.cell.height
        R = self.cell.radius
        x = (
            self.pd.area * (m + 1.0) * self.pd.responsivity / (2.0 * math.pi)
            * self.pd.filter_gain * self.pd.concentrator_gain * L ** (m + 1.0)
        )
        gmin = x / (R * R + L * L) ** ((m + 3.0) / 2.0)
        gmax = x / L ** (m + 3.0)
        mu = self.power.snr_scale
        object.__setattr__(self, "aggregate_factor", x)
        object.__setattr__(self, "gain_min", gmin)
        object.__setattr__(self, "gain_max", gmax)
        object.__setattr__(self, "snr_min", mu * gmin * gmin)
        object.__setattr__(self, "snr_max", mu * gmax * gmax)
        if not 0.0 < gmin < gmax:
            raise ValueError("derived gain bounds violate 0 < gain_min < gain_max")

    @property
    def fov_covers_cell(self) -> bool:
        """True when every user on the disk is inside the detector FOV.

        The closed-form gain/SNR densities assume this; with the standard
        Psi = 90 deg it always holds.
        """
        return math.atan2(self.cell.radius, self.cell.height) <= self.pd.field_of_view

    def _require_full_fov(self):
        if not self.fov_covers_cell:
            raise ValueError(
                "field_of_view excludes part of the cell; the closed-form "
                "gain/SNR distributions are only valid when the FOV covers "
                "the whole coverage disk"
            )


def channel_gain(model: SystemModel, radial_distance):
    """DC channel gain h(r) for a user at radial distance r (scalar or array).

    Strictly decreasing in r; equals gain_max at r = 0 and gain_min at the
    cell edge.  Incidence angles beyond the detector FOV contribute zero
    gain (dead branch for the standard 90 deg FOV).
    """
    r = np.asarray(radial_distance, dtype=float)
    R = model.cell.radius
    if np.any(r < 0) or np.any(r > R):
        raise ValueError(f"radial_distance must lie in [0, {R}], got {radial_distance!r}")
    L = model.cell.height
    m = model.led.lambertian_order
    h = model.aggregate_factor / (r * r + L * L) ** ((m + 3.0) / 2.0)
    incidence = np.arctan2(r, L)
    h = np.where(incidence <= model.pd.field_of_view, h, 0.0)
    return h if h.ndim else float(h)


def snr_of_gain(model: SystemModel, gain):
    """Electrical SNR mu * gain^2 of a link with the given optical gain."""
    g = np.asarray(gain, dtype=float)
    if np.any(g < 0):
        raise ValueError(f"gain must be >= 0, got {gain!r}")
    out = model.power.snr_scale * g * g
    return out if out.ndim else float(out)


def radial_pdf(cell: CellGeometry, r):
    """Density 2r/R^2 of the radial distance of a uniformly placed user."""
    rr = np.asarray(r, dtype=float)
    out = np.where((rr >= 0) & (rr <= cell.radius), 2.0 * rr / cell.radius**2, 0.0)
    return out if out.ndim else float(out)


def snr_pdf(model: SystemModel, gamma):
    """Closed-form density of the single-user SNR on [snr_min, snr_max].

    f(gamma) = (mu X^2)^(1/(m+3)) / (R^2 (m+3)) * gamma^(-(m+4)/(m+3)),
    zero outside the support.
    """
    model._require_full_fov()
    g = np.asarray(gamma, dtype=float)
    m = model.led.lambertian_order
    k = m + 3.0
    a = model.power.snr_scale * model.aggregate_factor**2
    c = a ** (1.0 / k) / (model.cell.radius**2 * k)
    inside = (g >= model.snr_min) & (g <= model.snr_max)
    # power evaluated only inside the support to avoid overflow warnings
    out = np.zeros_like(g)
    gi = np.where(inside, g, 1.0)
    out = np.where(inside, c * gi ** (-(k + 1.0) / k), 0.0)
    return out if out.ndim else float(out)


def snr_cdf_closed_form(model: SystemModel, gamma):
    """Exact CDF of the single-user SNR (antiderivative of `snr_pdf`).

    F(gamma) = clamp(((R^2 + L^2) - (mu X^2 / gamma)^(1/(m+3))) / R^2, 0, 1).
    Used as the single-active-user reference throughout the package.
    """
    model._require_full_fov()
    g = np.asarray(gamma, dtype=float)
    if np.any(g <= 0):
        raise ValueError(f"gamma must be > 0, got {gamma!r}")
    m = model.led.lambertian_order
    k = m + 3.0
    a = model.power.snr_scale * model.aggregate_factor**2
    R2 = model.cell.radius**2
    L2 = model.cell.height**2
    val = ((R2 + L2) - (a / g) ** (1.0 / k)) / R2
    out = np.clip(val, 0.0, 1.0)
    return out if out.ndim else float(out)


def build_model(
    semi_angle: float = math.radians(60.0),
    fov: float = math.pi / 2,
    area: float = 1e-4,
    responsivity: float = 0.4,
    filter_gain: float = 1.0,
    lens_refractive_index: float = 1.5,
    eta: float = 0.8,
    noise_psd: float = 1e-21,
    bandwidth: float = 200e3,
    tx_power: float = 30e-3,
    height: float = 2.5,
    radius: float = 3.0,
) -> SystemModel:
    """Assemble a SystemModel from flat SI parameters.

    Defaults reproduce the reference indoor setup: 1 cm^2 detector,
    0.4 A/W, 30 mW LED with 60 deg semi-angle (m = 1), 90 deg FOV,
    N_0 = 1e-21 W/Hz, B = 200 kHz, AP 2.5 m above a 3 m disk.
    """
    return SystemModel(
        led=LedTransmitter(semi_angle_half_power=semi_angle),
        pd=PhotoDetector(
            area=area,
            responsivity=responsivity,
            filter_gain=filter_gain,
            lens_refractive_index=lens_refractive_index,
            field_of_view=fov,
        ),
        cell=CellGeometry(radius=radius, height=height),
        power=PowerNoiseParams(
            tx_optical_power=tx_power,
            oe_conversion=eta,
            noise_psd=noise_psd,
            bandwidth=bandwidth,
        ),
    )


def default_model() -> SystemModel:
    """The reference indoor cell (see `build_model` defaults)."""
    return build_model()

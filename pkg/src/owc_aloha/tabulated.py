"""Numeric PDF/CDF of a scalar random variable on a bounded support grid.

TabulatedDistribution is the common currency between the analytic pipeline
(characteristic-function inversion, ratio-distribution integrals) and the
Monte Carlo path.  Construction enforces the normalization contract so that
a distribution object is always safe to integrate against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["TabulatedDistribution", "CDF_EDGE_TOL", "TRAPZ_CONSISTENCY_TOL"]

CDF_EDGE_TOL = 1e-3          # |cdf[-1] - 1| allowance
TRAPZ_CONSISTENCY_TOL = 1e-6  # cdf[-1] vs trapezoid of pdf


@dataclass(frozen=True)
class TabulatedDistribution:
    """PDF/CDF samples on a strictly increasing grid.

    The grid spans [support_lo, support_hi]; its first and last nodes may sit
    exactly on the support edges or inside by at most one grid step (the
    latter happens for reconstructions whose boundary values are obtained by
    one-sided limits).  cdf_values[i] is the probability mass below grid[i]
    and is tied to the trapezoidal integral of pdf_values by construction.
    """

    support_lo: float
    support_hi: float
    grid: np.ndarray
    pdf_values: np.ndarray
    cdf_values: np.ndarray = field(default=None)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        pdf = np.asarray(self.pdf_values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "pdf_values", pdf)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must be a 1-D array with at least 2 nodes")
        if pdf.shape != grid.shape:
            raise ValueError("pdf_values must match grid shape")
        if self.cdf_values is None:
            cdf = _cumtrapz(pdf, grid)
            object.__setattr__(self, "cdf_values", cdf)
        else:
            object.__setattr__(
                self, "cdf_values", np.asarray(self.cdf_values, dtype=float)
            )
        self.validate()

    def validate(self):
        grid, pdf, cdf = self.grid, self.pdf_values, self.cdf_values
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        step = np.max(np.diff(grid))
        if grid[0] < self.support_lo - 1e-9 * max(1.0, abs(self.support_lo)):
            raise ValueError("grid starts below support_lo")
        if grid[-1] > self.support_hi + 1e-9 * max(1.0, abs(self.support_hi)):
            raise ValueError("grid ends above support_hi")
        if grid[0] - self.support_lo > step or self.support_hi - grid[-1] > step:
            raise ValueError("grid does not cover the support at grid resolution")
        if np.any(pdf < 0):
            raise ValueError("pdf_values must be nonnegative")
        if np.any(np.diff(cdf) < -1e-12):
            raise ValueError("cdf_values must be nondecreasing")
        if cdf[0] < -1e-12:
            raise ValueError("cdf_values[0] must be >= 0")
        if abs(cdf[-1] - 1.0) > CDF_EDGE_TOL:
            raise ValueError(
                f"cdf_values[-1] = {cdf[-1]:.6f} outside [1 - {CDF_EDGE_TOL}, 1 + {CDF_EDGE_TOL}]"
            )
        total = np.trapezoid(pdf, grid)
        if abs(total + cdf[0] - cdf[-1]) > TRAPZ_CONSISTENCY_TOL:
            raise ValueError(
                "cdf_values inconsistent with the trapezoidal integral of pdf_values "
                f"({total + cdf[0]:.9f} vs {cdf[-1]:.9f})"
            )

    # -- evaluation ---------------------------------------------------------

    def pdf_at(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.grid, self.pdf_values, left=0.0, right=0.0)
        return out if out.ndim else float(out)

    def cdf_at(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.grid, self.cdf_values, left=0.0, right=self.cdf_values[-1])
        out = np.where(x >= self.support_hi, self.cdf_values[-1], out)
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return float(np.trapezoid(self.grid * self.pdf_values, self.grid))

    def total_mass(self) -> float:
        return float(self.cdf_values[-1])

    def sup_cdf_distance(self, other: "TabulatedDistribution") -> float:
        """Maximum absolute CDF difference on the union of both grids."""
        xs = np.union1d(self.grid, other.grid)
        return float(np.max(np.abs(self.cdf_at(xs) - other.cdf_at(xs))))


def _cumtrapz(y, x):
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x), out=out[1:])
    return out

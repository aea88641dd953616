"""Walk through the indoor optical cell and its single-user SNR statistics.

A ceiling photodetector at height L watches a disk of radius R on which the
IoT transmitters are scattered uniformly.  The script prints the derived
channel constants, plots the gain profile across the cell, and overlays the
closed-form SNR density/CDF with a histogram of sampled users.

Run:  python demos/01_channel_model.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from owc_aloha import (
    McConfig,
    channel_gain,
    default_model,
    snr_cdf_closed_form,
    snr_of_gain,
    snr_pdf,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

model = default_model()

print("=" * 60)
print("Reference indoor cell")
print("=" * 60)
print(f"  Lambertian order m     : {model.led.lambertian_order:.3f}")
print(f"  aggregate factor       : {model.aggregate_factor:.4e}")
print(f"  gain range             : [{model.gain_min:.3e}, {model.gain_max:.3e}]")
print(f"  SNR scale mu           : {model.power.snr_scale:.3e}")
print(f"  SNR support            : [{model.snr_min:.3f}, {model.snr_max:.3f}]"
      f"  ({10*np.log10(model.snr_min):.1f} .. {10*np.log10(model.snr_max):.1f} dB)")

# gain and SNR across the cell
r = np.linspace(0.0, model.cell.radius, 400)
gain = channel_gain(model, r)
snr = snr_of_gain(model, gain)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].plot(r, gain * 1e6)
axes[0].set_xlabel("radial distance r [m]")
axes[0].set_ylabel("channel gain x 1e6")
axes[0].grid(True)
axes[1].plot(r, 10 * np.log10(snr))
axes[1].set_xlabel("radial distance r [m]")
axes[1].set_ylabel("SNR [dB]")
axes[1].grid(True)
fig.suptitle("Line-of-sight gain and SNR across the cell")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "channel_profile.png"), dpi=120)

# sampled users against the closed-form SNR law
rng = McConfig(seed=42).generator()
u = rng.random(200_000)
r_draw = model.cell.radius * np.sqrt(u)
g_draw = snr_of_gain(model, channel_gain(model, r_draw))

xs = np.geomspace(model.snr_min, model.snr_max, 400)
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].hist(g_draw, bins=60, density=True, alpha=0.5, label="200k sampled users")
axes[0].plot(xs, snr_pdf(model, xs), "r-", lw=2, label="closed form")
axes[0].set_xlabel("SNR (linear)")
axes[0].set_ylabel("density")
axes[0].legend()
axes[1].plot(np.sort(g_draw), np.linspace(0, 1, g_draw.size), alpha=0.7,
             label="empirical CDF")
axes[1].plot(xs, snr_cdf_closed_form(model, xs), "r--", lw=2, label="closed form")
axes[1].set_xlabel("SNR (linear)")
axes[1].set_ylabel("CDF")
axes[1].legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "snr_distribution.png"), dpi=120)
print(f"\nfigures saved under {OUT}/")

"""Outage probability versus the user population under Bernoulli arrivals.

Every one of U users wakes up per slot with probability p_a; the decoded
(reference) user survives if its SINR clears the 3 dB threshold.  The
classical baseline destroys every collision, so the gap between the curves
is the value of the capture effect.  Monte Carlo points cross-check the
analytic mixture.

Run:  python demos/03_outage_vs_traffic.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from owc_aloha import McConfig, OutageQuery, TrafficModel, default_model, sweep

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

model = default_model()
query = OutageQuery(threshold=10 ** 0.3)   # 3 dB
users = [1, 2, 5, 10, 20, 50, 100, 200]

fig, ax = plt.subplots(figsize=(7, 5))
for pa, color in zip((0.01, 0.1, 0.3), ("C0", "C1", "C2")):
    res = sweep(model, TrafficModel(50, pa), query, "users", users,
                mc=McConfig(trials=100_000, seed=17))
    cap = [r.p_out_capture for r in res.rows]
    cls = [r.p_out_classical for r in res.rows]
    mc = [r.mc_value for r in res.rows]
    ax.semilogy(users, cap, color=color, lw=2, label=f"capture, pa={pa}")
    ax.semilogy(users, cls, color=color, ls="--", lw=1.5, label=f"classical, pa={pa}")
    ax.semilogy(users, mc, color=color, marker="s", ls="none", ms=5, mfc="none")
    print(f"pa={pa}: capture outage {cap[0]:.4f} (U=1) .. {cap[-1]:.4f} (U=200)")

ax.set_xlabel("total number of users U")
ax.set_ylabel("outage probability")
ax.grid(True, which="both", alpha=0.4)
ax.legend(fontsize=8)
ax.set_title("Capture vs classical slotted ALOHA (squares: Monte Carlo)")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "outage_vs_users.png"), dpi=120)
print(f"figure saved under {OUT}/")

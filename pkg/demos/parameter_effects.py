"""
How the junction responds to its parameters
===========================================

Two one-dimensional sweeps around the default operating point.  Raising
the fractional order alpha toward the classical limit depresses the
spatial means of phase, current and voltage at the final time, while
raising the bias ratio lambda pushes the junction harder and raises all
three.

Run from the repository root:

    python3 demos/parameter_effects.py

Writes parameter_effects.png next to this script.
"""

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from jjphase.observables import josephson_current, voltage_at_level
from jjphase.params import DimensionlessParams
from jjphase.solver import SolverConfig, run

OUT = Path(__file__).resolve().parent

N, M = 80, 120


def final_means(params):
    """Spatial means of phase, current and voltage at the final time."""
    traj = run(SolverConfig(params=params, n=N, m=M, snapshots=2))
    phase = traj.final_phase
    return (float(np.mean(phase)),
            float(np.mean(josephson_current(phase))),
            float(np.mean(voltage_at_level(traj, traj.grid.m))))


base = DimensionlessParams()
sweeps = {
    "alpha": (0.7, 0.8, 0.9, 1.0),
    "lam": (0.2, 0.4, 0.6, 0.8),
}

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
labels = ("mean phase", "mean current", "mean voltage")

for ax, (field, values) in zip(axes, sweeps.items()):
    rows = np.array([final_means(replace(base, **{field: v})) for v in values])
    for j, lab in enumerate(labels):
        ax.plot(values, rows[:, j], "o-", label=lab)
        trend = "up" if rows[-1, j] > rows[0, j] else "down"
        print(f"{field}: {lab} goes {trend} "
              f"({rows[0, j]:.4f} -> {rows[-1, j]:.4f})")
    ax.set_xlabel("lambda" if field == "lam" else field)
    ax.set_title(f"sweep over {'lambda' if field == 'lam' else field}")
    ax.legend(fontsize=8)

fig.tight_layout()
fig.savefig(OUT / "parameter_effects.png", dpi=150)
print(f"wrote {OUT / 'parameter_effects.png'}")

"""
Verifying the solver with a manufactured solution
=================================================

Pick an exact phase (the static kink plus t^2), derive the forcing that
makes it solve the fractional sine-Gordon equation exactly, and measure
how fast the numerical solution converges to it under mesh refinement
with tau proportional to h.  Second order in L2 and first order in H1
confirm the finite elements and the fractional stepping work together.

Run from the repository root:

    python3 demos/convergence_check.py

Writes convergence_check.png next to this script.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from jjphase.mms import convergence_study
from jjphase.params import DimensionlessParams

OUT = Path(__file__).resolve().parent

params = DimensionlessParams()  # alpha = 0.9 and the default coefficients
table = convergence_study(params, mesh_sizes=(20, 40, 80, 160))

print("n      h         tau        L2 error     H1 error")
for n, h, tau, l2, h1 in zip(table.mesh_sizes, table.h, table.tau,
                             table.l2, table.h1):
    print(f"{n:<6d} {h:<9.4g} {tau:<10.4g} {l2:<12.4e} {h1:<12.4e}")
print(f"fitted L2 slope: {table.slope_l2:.3f} (expect about 2)")
print(f"fitted H1 slope: {table.slope_h1:.3f} (expect about 1)")

fig, (ax_err, ax_sol) = plt.subplots(1, 2, figsize=(10, 4))

# Left: errors against h on a log-log scale, with the fitted slopes.
ax_err.loglog(table.h, table.l2, "o-", label=f"L2 (slope {table.slope_l2:.2f})")
ax_err.loglog(table.h, table.h1, "s-", label=f"H1 (slope {table.slope_h1:.2f})")
ax_err.loglog(table.h, table.l2[0] * (table.h / table.h[0]) ** 2,
              "k--", lw=0.8, label="h^2 reference")
ax_err.set_xlabel("h")
ax_err.set_ylabel("final-time error")
ax_err.set_title("convergence under refinement")
ax_err.legend(fontsize=8)

# Right: computed and exact profiles overlap at the finest mesh; plot the
# pointwise deviation, which is far below line width.
overlay = table.overlays[-1]
ax_sol.plot(overlay.nodes, overlay.approx - overlay.exact, color="tab:red")
ax_sol.set_xlabel("z")
ax_sol.set_ylabel("computed - exact")
ax_sol.set_title(f"final-time deviation, n = {overlay.n}")
print(f"max nodal deviation at n = {overlay.n}: {overlay.max_deviation:.3e}")

fig.tight_layout()
fig.savefig(OUT / "convergence_check.png", dpi=150)
print(f"wrote {OUT / 'convergence_check.png'}")

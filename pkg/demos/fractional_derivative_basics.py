"""
The discrete Caputo derivative and its accuracy
===============================================

The solver replaces the time derivatives of the classical sine-Gordon
equation with Caputo derivatives of order alpha and 2*alpha, discretized
by the L1 scheme.  This script probes the discretization directly on the
test signal u(t) = t^2, whose Caputo derivative of order alpha is known in
closed form:

    D_t^alpha t^2 = 2 t^(2 - alpha) / Gamma(3 - alpha).

The L1 error at fixed time should shrink like tau^(2 - alpha), and at
alpha = 1 the scheme must collapse to the plain backward difference.

Run from the repository root:

    python3 demos/fractional_derivative_basics.py

Writes fractional_derivative_basics.png next to this script.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from jjphase.fractime import TimeGrid, discrete_caputo, l1_weights

OUT = Path(__file__).resolve().parent

alphas = (0.6, 0.75, 0.9)
taus = np.array([1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512])

fig, (ax_err, ax_w) = plt.subplots(1, 2, figsize=(10, 4))

for alpha in alphas:
    errs = []
    exact = 2.0 / math.gamma(3.0 - alpha)  # value at t = 1
    for tau in taus:
        m = int(round(1.0 / tau))
        t = np.linspace(0.0, 1.0, m + 1)
        approx = discrete_caputo(t * t, alpha, tau, m - 1)
        errs.append(abs(approx - exact))
    errs = np.asarray(errs)
    # Fit the observed order from consecutive refinements.
    orders = np.diff(np.log(errs)) / np.log(0.5)
    print(f"alpha = {alpha}: expected order {2.0 - alpha:.2f}, "
          f"observed {orders[-1]:.3f}")
    ax_err.loglog(taus, errs, "o-", label=f"alpha = {alpha}")

# Reference slope tau^(2 - 0.75) anchored at the middle curve.
ref = taus ** 1.25 * 0.3
ax_err.loglog(taus, ref, "k--", lw=0.8, label="slope 1.25")
ax_err.set_xlabel("tau")
ax_err.set_ylabel("|error| at t = 1")
ax_err.set_title("L1 error for u = t^2")
ax_err.legend(fontsize=8)

# The convolution weights b_p = (p+1)^(1-alpha) - p^(1-alpha) decide how
# much each past increment contributes: a slowly decaying tail for small
# alpha (long memory), and identically zero at alpha = 1 (no memory).
grid = TimeGrid(t_final=1.0, m=64)
for alpha in alphas + (1.0,):
    co = l1_weights(alpha, grid)
    ax_w.semilogy(np.arange(1, 33), np.maximum(co.b_alpha[:32], 1e-17),
                  label=f"alpha = {alpha}")
ax_w.set_xlabel("p")
ax_w.set_ylabel("b_p")
ax_w.set_title("memory weights")
ax_w.legend(fontsize=8)

co = l1_weights(1.0, grid)
print(f"alpha = 1: all weights vanish "
      f"({np.all(co.b_alpha == 0.0) and np.all(co.b_2alpha == 0.0)}), "
      f"prefactor c_alpha = {co.c_alpha:g} = 1/tau")

fig.tight_layout()
fig.savefig(OUT / "fractional_derivative_basics.png", dpi=150)
print(f"wrote {OUT / 'fractional_derivative_basics.png'}")

"""Manufactured-solution verification of the solver.

The fabricated solution phi_ex(z, t) = 4 arctan(exp((z-0.1)/sqrt(1-c^2))) + t^2
is forced into the junction equation by adding

    F_art(z, t) = sin(phi_ex) - kink''(z)
                  + 2 gamma1 t^(2-a)/Gamma(3-a)
                  + 2 gamma2 t^(2-2a)/Gamma(3-2a) - lam

to the load, so the continuous problem (with boundary slopes matching the
kink) has phi_ex as its exact solution. Running the solver over a sequence
of meshes with tau proportional to h and regressing log(error) against
log(h) then measures the spatial convergence order: close to 2 in L2 and
1 in H1 for linear elements.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import StepFailureError
from .mesh import gauss_rule
from .observables import h1_error, l2_error
from .params import Z_LEFT, Z_RIGHT
from .solver import SolverConfig, initial_phase, run

DEFAULT_MESH_SIZES = (40, 80, 160, 320)

# Default time-step coupling tau = h * DEFAULT_TAU_PER_H. The scheme's
# first-order temporal memory error must stay subdominant to the h^2
# spatial error across the default meshes; 1/240 was calibrated to keep
# the fitted L2 slope near 2 (see tests) while staying desk-scale fast.
DEFAULT_TAU_PER_H = 1.0 / 240.0


def _scaled_coordinate(z, c):
    if not (0.0 <= c < 1.0):
        raise ValueError(f"kink velocity c = {c} must lie in [0, 1)")
    s = math.sqrt(1.0 - c * c)
    return np.asarray(z, dtype=float) - 0.1, s


def fabricated_solution(z, t, c=0.9):
    """Exact manufactured phase: moving-kink profile plus t^2."""
    return initial_phase(z, c) + np.square(t)


def kink_derivative(z, c=0.9):
    """d/dz of the kink profile: (2/s) sech((z - 0.1)/s), s = sqrt(1-c^2)."""
    u, s = _scaled_coordinate(z, c)
    with np.errstate(over="ignore"):
        return (2.0 / s) / np.cosh(u / s)


def kink_second_derivative(z, c=0.9):
    """d^2/dz^2 of the kink profile: -(2/s^2) tanh(u) sech(u).

    Algebraically equal to the exponential form
    (4/s^2) (e^u - e^{3u}) / (1 + e^{2u})^2 with u = (z-0.1)/s, but safe
    against overflow for large |z|.
    """
    u, s = _scaled_coordinate(z, c)
    u = u / s
    with np.errstate(over="ignore"):
        return -(2.0 / (s * s)) * np.tanh(u) / np.cosh(u)


def consistent_boundary_slopes(c=0.9):
    """Neumann slopes of the fabricated solution at the domain ends."""
    return (float(kink_derivative(Z_LEFT, c)), float(kink_derivative(Z_RIGHT, c)))


def artificial_forcing(z, t, params):
    """Source term that makes fabricated_solution solve the junction equation.

    Parameters
    ----------
    z : array_like
    t : float or array_like
    params : DimensionlessParams
        Supplies alpha, gamma1, gamma2, lam and the kink velocity c.

    Returns
    -------
    ndarray (broadcast of z and t)
    """
    a = params.alpha
    t = np.asarray(t, dtype=float)
    frac = (2.0 * params.gamma1 / math.gamma(3.0 - a) * np.power(t, 2.0 - a)
            + 2.0 * params.gamma2 / math.gamma(3.0 - 2.0 * a)
            * np.power(t, 2.0 - 2.0 * a))
    return (np.sin(fabricated_solution(z, t, params.c))
            - kink_second_derivative(z, params.c) + frac - params.lam)


def fit_slope(points):
    """Ordinary least-squares line through (log h, log err) pairs.

    Parameters
    ----------
    points : array_like of shape (k, 2)
        At least two rows with distinct abscissae.

    Returns
    -------
    (slope, intercept, residual) with residual the RMS misfit.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.ptp(x) == 0.0:
        raise ValueError("degenerate fit: all abscissae equal")
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid ** 2)))


@dataclass(frozen=True)
class MeshOverlay:
    """Final-time nodal overlay of one refinement run."""

    n: int
    nodes: np.ndarray
    approx: np.ndarray
    exact: np.ndarray

    @property
    def max_deviation(self):
        return float(np.max(np.abs(self.approx - self.exact)))


@dataclass(frozen=True)
class ConvergenceTable:
    """Refinement rows (h, tau, errors) and fitted slopes.

    Slopes are None when fewer than two rows are available.
    """

    mesh_sizes: np.ndarray
    h: np.ndarray
    tau: np.ndarray
    l2: np.ndarray
    h1: np.ndarray
    overlays: tuple
    slope_l2: Optional[float] = None
    intercept_l2: Optional[float] = None
    residual_l2: Optional[float] = None
    slope_h1: Optional[float] = None
    intercept_h1: Optional[float] = None
    residual_h1: Optional[float] = None

    def __post_init__(self):
        if np.any(np.diff(self.h) >= 0.0):
            raise ValueError("table rows must have strictly decreasing h")
        if np.any(self.l2 <= 0.0) or np.any(self.h1 <= 0.0):
            raise ValueError("error norms must be positive")

    @property
    def max_deviations(self):
        return np.array([o.max_deviation for o in self.overlays])

    def to_csv(self, path):
        lines = ["n,h,tau,l2_error,h1_error,max_deviation"]
        for i in range(self.h.shape[0]):
            lines.append(",".join([
                f"{int(self.mesh_sizes[i])}",
                f"{self.h[i]:.17g}", f"{self.tau[i]:.17g}",
                f"{self.l2[i]:.17g}", f"{self.h1[i]:.17g}",
                f"{self.overlays[i].max_deviation:.17g}",
            ]))
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    def summary(self):
        """JSON-ready dict of rows, slopes and fit residuals."""
        return {
            "mesh_sizes": [int(v) for v in self.mesh_sizes],
            "h": [float(v) for v in self.h],
            "tau": [float(v) for v in self.tau],
            "l2_error": [float(v) for v in self.l2],
            "h1_error": [float(v) for v in self.h1],
            "max_deviation": [float(v) for v in self.max_deviations],
            "slope_l2": self.slope_l2,
            "intercept_l2": self.intercept_l2,
            "residual_l2": self.residual_l2,
            "slope_h1": self.slope_h1,
            "intercept_h1": self.intercept_h1,
            "residual_h1": self.residual_h1,
        }


def _build_table(mesh_sizes, rows, overlays):
    ns = np.array([int(n) for n in mesh_sizes[:len(rows)]])
    arr = np.asarray(rows, dtype=float).reshape(-1, 4)
    kwargs = {}
    if arr.shape[0] >= 2:
        logh = np.log(arr[:, 0])
        s2, i2, r2 = fit_slope(np.column_stack([logh, np.log(arr[:, 2])]))
        s1, i1, r1 = fit_slope(np.column_stack([logh, np.log(arr[:, 3])]))
        kwargs = dict(slope_l2=s2, intercept_l2=i2, residual_l2=r2,
                      slope_h1=s1, intercept_h1=i1, residual_h1=r1)
    return ConvergenceTable(mesh_sizes=ns, h=arr[:, 0], tau=arr[:, 1],
                            l2=arr[:, 2], h1=arr[:, 3],
                            overlays=tuple(overlays), **kwargs)


def convergence_study(params, mesh_sizes=DEFAULT_MESH_SIZES, coupling=None,
                      newton_tol=1.0e-10, newton_max_iter=25):
    """Run the solver in manufactured-solution mode over a mesh sequence.

    Each mesh n gets tau = coupling(h); the run uses boundary slopes
    consistent with the fabricated solution and the artificial forcing.
    Final-time L2/H1 errors are fitted against h on a log-log scale
    (slopes omitted when only one mesh is given).

    Parameters
    ----------
    params : DimensionlessParams
        alpha, gamma1, gamma2, lam, c and t_final of the study.
    mesh_sizes : iterable of int
        Element counts, coarse to fine.
    coupling : callable, optional
        Maps h to tau; defaults to tau = DEFAULT_TAU_PER_H * h.
    newton_tol, newton_max_iter :
        Passed to the solver.

    Returns
    -------
    ConvergenceTable

    Raises
    ------
    StepFailureError
        If a run diverges; the exception carries the completed rows as a
        ``partial_table`` attribute.
    """
    mesh_sizes = [int(n) for n in mesh_sizes]
    if len(mesh_sizes) < 1:
        raise ValueError("need at least one mesh size")
    if sorted(set(mesh_sizes)) != mesh_sizes:
        raise ValueError("mesh sizes must be strictly increasing")
    if coupling is None:
        coupling = lambda h: DEFAULT_TAU_PER_H * h

    abc, bbc = consistent_boundary_slopes(params.c)
    mms_params = replace(params, abc=abc, bbc=bbc)
    forcing = lambda z, t: artificial_forcing(z, t, mms_params)
    exact = lambda z: fabricated_solution(z, mms_params.t_final, mms_params.c)
    exact_grad = lambda z: kink_derivative(z, mms_params.c)
    quad = gauss_rule(5)

    rows = []
    overlays = []
    for n in mesh_sizes:
        h = (Z_RIGHT - Z_LEFT) / n
        tau_req = coupling(h)
        if tau_req <= 0.0:
            raise ValueError(f"coupling produced tau = {tau_req} for h = {h}")
        m = max(2, round(mms_params.t_final / tau_req))
        cfg = SolverConfig(params=mms_params, n=n, m=m,
                           newton_tol=newton_tol,
                           newton_max_iter=newton_max_iter,
                           snapshots=2, forcing=forcing)
        try:
            traj = run(cfg)
        except StepFailureError as err:
            err.partial_table = _build_table(mesh_sizes, rows, overlays)
            raise
        final = traj.final_phase
        exact_nodes = exact(traj.mesh.nodes)
        rows.append((h, traj.grid.tau,
                     l2_error(final, exact, traj.mesh, quad),
                     h1_error(final, exact, traj.mesh, quad,
                              exact_grad=exact_grad)))
        overlays.append(MeshOverlay(n=n, nodes=traj.mesh.nodes.copy(),
                                    approx=final.copy(), exact=exact_nodes))
    return _build_table(mesh_sizes, rows, overlays)

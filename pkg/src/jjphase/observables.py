"""Post-processing of phase trajectories into measurable quantities.

The nodal phase determines the normalized Josephson current sin(phi), the
dimensionless voltage (the order-alpha Caputo derivative of the phase) and
the in-plane magnetic field (the phase slope per element). Error norms
against a reference profile are evaluated element-by-element with Gauss
quadrature on the linear interpolant.

Everything is dimensionless by default; physical_scales supplies the SI
prefactors for a concrete junction.
"""

from dataclasses import dataclass

import numpy as np

from .fractime import memory_term_alpha
from .mesh import gauss_rule
from .params import PHI0, derive_constants

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ObservableField:
    """A named field sampled at one time: phase, current, voltage or field."""

    kind: str
    values: np.ndarray
    time: float
    where: str = "nodes"


def josephson_current(phase):
    """Normalized supercurrent density J_s/J_c = sin(phase)."""
    return np.sin(np.asarray(phase, dtype=float))


def voltage(history, coeffs, k):
    """Dimensionless voltage at t_{k+1}: the order-alpha Caputo derivative.

    Parameters
    ----------
    history : HistoryBuffer
        Levels phi^0 .. phi^{k+1} at least.
    coeffs : L1Coefficients
    k : int

    Returns
    -------
    ndarray of nodal voltages.
    """
    if len(history) < k + 2:
        raise ValueError(
            f"voltage at t_{k + 1} needs levels 0..{k + 1}, history holds "
            f"{len(history)}")
    diff = history[k + 1] - history[k]
    return coeffs.c_alpha * (diff + memory_term_alpha(history, k, coeffs))


def voltage_at_level(trajectory, level):
    """Voltage aligned with a snapshot level; level 0 is exactly zero."""
    if level == 0:
        return np.zeros(trajectory.mesh.n + 1)
    return voltage(trajectory.history, trajectory.coeffs, level - 1)


def magnetic_field(phase, mesh, average=False):
    """Dimensionless in-plane field: the phase slope.

    Per-element slopes (phi_{i+1} - phi_i)/h_i by default; with
    average=True, slopes are averaged onto nodes (one-sided at the ends).

    Returns
    -------
    ndarray of n per-element values, or n+1 nodal values when averaging.
    """
    phase = np.asarray(phase, dtype=float)
    slopes = np.diff(phase) / mesh.element_lengths
    if not average:
        return slopes
    out = np.empty(mesh.n + 1)
    out[0] = slopes[0]
    out[-1] = slopes[-1]
    out[1:-1] = 0.5 * (slopes[:-1] + slopes[1:])
    return out


def _element_samples(approx, mesh, quad):
    h = mesh.element_lengths
    zq = mesh.nodes[:-1, None] + h[:, None] * quad.points[None, :]
    uh = (np.asarray(approx, dtype=float)[:-1, None] * (1.0 - quad.points)
          + np.asarray(approx, dtype=float)[1:, None] * quad.points)
    return zq, uh


def l2_error(approx, exact, mesh, quad=None):
    """L2 norm of (linear interpolant of approx) - exact.

    Parameters
    ----------
    approx : nodal vector
    exact : callable
        Reference profile, vectorized in z.
    mesh : Mesh1D
    quad : QuadratureRule, optional
        Degree >= 4; defaults to the degree-5 rule.
    """
    if quad is None:
        quad = gauss_rule(5)
    if quad.degree < 4:
        raise ValueError(f"need quadrature degree >= 4, got {quad.degree}")
    zq, uh = _element_samples(approx, mesh, quad)
    err2 = (uh - exact(zq)) ** 2
    return float(np.sqrt(np.sum(mesh.element_lengths * (err2 @ quad.weights))))


def _central_derivative(f, z, delta=1.0e-5):
    """Five-point derivative used when no closed-form gradient is supplied."""
    return (8.0 * (f(z + delta) - f(z - delta))
            - (f(z + 2.0 * delta) - f(z - 2.0 * delta))) / (12.0 * delta)


def h1_error(approx, exact, mesh, quad=None, exact_grad=None):
    """H1 norm of the error: (L2(err)^2 + L2(err')^2)^(1/2).

    exact_grad is the derivative of the reference profile; when omitted it
    is approximated by five-point central differences of exact.
    """
    if quad is None:
        quad = gauss_rule(5)
    if quad.degree < 4:
        raise ValueError(f"need quadrature degree >= 4, got {quad.degree}")
    if exact_grad is None:
        exact_grad = lambda z: _central_derivative(exact, z)
    zq, uh = _element_samples(approx, mesh, quad)
    err2 = (uh - exact(zq)) ** 2
    slope = np.diff(np.asarray(approx, dtype=float)) / mesh.element_lengths
    gerr2 = (slope[:, None] - exact_grad(zq)) ** 2
    total = np.sum(mesh.element_lengths * ((err2 + gerr2) @ quad.weights))
    return float(np.sqrt(total))


@dataclass(frozen=True)
class PhysicalScales:
    """SI prefactors turning dimensionless outputs into measured units.

    Multiply a dimensionless voltage/current/field value by the matching
    scale; length and time convert axis coordinates.
    """

    voltage: float          # volts per dimensionless voltage unit
    current_density: float  # A/m^2 per unit of sin(phi)
    field: float            # tesla per unit phase slope
    length: float           # meters per unit z
    time: float             # seconds per unit t


def physical_scales(phys, constants=None):
    """Unit scales of a junction; constants are derived when not supplied.

    The voltage relation (1/eta^(1-a)) D_t^a phi = (2 pi / PHI0) V combined
    with the eta time scaling collapses to V = PHI0/(2 pi eta) per unit of
    the dimensionless Caputo voltage, independent of alpha.
    """
    con = constants if constants is not None else derive_constants(phys)
    eta = phys.eta if phys.eta is not None else con.lambda_j / con.cbar
    return PhysicalScales(
        voltage=PHI0 / (TWO_PI * eta),
        current_density=phys.jc,
        field=PHI0 / (TWO_PI * phys.t_b * con.lambda_j),
        length=con.lambda_j,
        time=eta,
    )

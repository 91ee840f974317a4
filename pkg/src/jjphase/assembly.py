"""Linear-element assembly on the junction axis.

Hat functions on a uniform mesh give tridiagonal stiffness and mass
matrices with the classic element blocks

    stiffness = (1/h) [[ 1, -1], [-1,  1]]
    mass      = (h/6) [[ 2,  1], [ 1,  2]]

The nonlinear term integrates sin of the piecewise-linear phase exactly:
with phase values (phi_i, phi_{i+1}) on an element, mean f = (phi_i+phi_{i+1})/2
and half-swing d = (phi_{i+1}-phi_i)/2, the two load entries are

    h/2 * [ sin(f)*sinc(d) -+ cos(f)*g(d) ],    g(d) = (sin d - d cos d)/d^2

which is the closed-form antiderivative rearranged so nothing cancels as
d -> 0. Below a phase swing of 1e-6 a two-term series is used instead.
"""

import math
from dataclasses import dataclass

import numpy as np

from .mesh import gauss_rule

# Phase-swing threshold of the series branch of the sine load.
SERIES_SWITCH = 1.0e-6

# Composite-quadrature panel size (radians of phase swing per panel) for the
# sine Jacobian; 0.25 rad per panel keeps a 3-point Gauss rule near 1e-12
# relative accuracy.
_PANEL_PHASE = 0.25


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric-profile tridiagonal matrix in three diagonals.

    diag has length n+1; lower[i] couples row i+1 to column i and upper[i]
    couples row i to column i+1 (both length n).
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    @property
    def size(self):
        return self.diag.shape[0]

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-1] += self.upper * x[1:]
        y[1:] += self.lower * x[:-1]
        return y

    def to_banded(self):
        """(3, n+1) band storage for scipy.linalg.solve_banded((1, 1), ...)."""
        n1 = self.size
        ab = np.zeros((3, n1))
        ab[0, 1:] = self.upper
        ab[1, :] = self.diag
        ab[2, :-1] = self.lower
        return ab

    def __add__(self, other):
        return TridiagonalMatrix(self.lower + other.lower,
                                 self.diag + other.diag,
                                 self.upper + other.upper)

    def __mul__(self, scalar):
        return TridiagonalMatrix(scalar * self.lower, scalar * self.diag,
                                 scalar * self.upper)

    __rmul__ = __mul__


def element_stiffness(h):
    """Element stiffness block (1/h)[[1,-1],[-1,1]]."""
    if h <= 0.0:
        raise ValueError(f"element length must be positive, got h = {h}")
    return (1.0 / h) * np.array([[1.0, -1.0], [-1.0, 1.0]])


def element_mass(h):
    """Element mass block (h/6)[[2,1],[1,2]]."""
    if h <= 0.0:
        raise ValueError(f"element length must be positive, got h = {h}")
    return (h / 6.0) * np.array([[2.0, 1.0], [1.0, 2.0]])


def _g_factor(d):
    """(sin d - d cos d)/d^2, series below |d| = 0.25 to dodge cancellation."""
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 0.25
    d2 = d * d
    series = (d / 3.0) * (1.0 - (d2 / 10.0) * (1.0 - (d2 / 28.0) * (1.0 - d2 / 54.0)))
    safe = np.where(small, 1.0, d)
    closed = (np.sin(safe) - safe * np.cos(safe)) / (safe * safe)
    return np.where(small, series, closed)


def _sinc_factor(d):
    """sin(d)/d with a series guard near zero."""
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 1.0e-4
    d2 = d * d
    series = 1.0 - (d2 / 6.0) * (1.0 - d2 / 20.0)
    safe = np.where(small, 1.0, d)
    return np.where(small, series, np.sin(safe) / safe)


def _sine_load_closed(phi_l, phi_r, h):
    """Closed-form element sine load, stable mean/half-swing arrangement."""
    mean = 0.5 * (phi_l + phi_r)
    d = 0.5 * (phi_r - phi_l)
    s, c = np.sin(mean), np.cos(mean)
    sc = _sinc_factor(d)
    g = _g_factor(d)
    return 0.5 * h * (s * sc - c * g), 0.5 * h * (s * sc + c * g)


def _sine_load_series(phi_l, phi_r, h):
    """Two-term small-swing expansion of the element sine load."""
    mean = 0.5 * (phi_l + phi_r)
    swing = phi_r - phi_l
    s, c = np.sin(mean), np.cos(mean)
    return 0.5 * h * (s - swing / 6.0 * c), 0.5 * h * (s + swing / 6.0 * c)


def sine_load(element_phase, h):
    """Element load vector of sin(phase) against the two hat functions.

    Parameters
    ----------
    element_phase : pair of floats
        Phase values (phi_i, phi_{i+1}) at the element ends.
    h : float
        Element length, positive.

    Returns
    -------
    ndarray of shape (2,)
        h * integral of sin(phi(s)) * N_p(s) ds over the reference element.
    """
    if h <= 0.0:
        raise ValueError(f"element length must be positive, got h = {h}")
    phi_l, phi_r = float(element_phase[0]), float(element_phase[1])
    if abs(phi_r - phi_l) < SERIES_SWITCH:
        left, right = _sine_load_series(phi_l, phi_r, h)
    else:
        left, right = _sine_load_closed(phi_l, phi_r, h)
    return np.array([left, right])


def sine_load_vector(phase, mesh):
    """Assembled global sine load for a nodal phase vector."""
    phi_l, phi_r = phase[:-1], phase[1:]
    h = mesh.element_lengths
    swing_small = np.abs(phi_r - phi_l) < SERIES_SWITCH
    cl, cr = _sine_load_closed(phi_l, phi_r, h)
    sl, sr = _sine_load_series(phi_l, phi_r, h)
    left = np.where(swing_small, sl, cl)
    right = np.where(swing_small, sr, cr)
    out = np.zeros(mesh.n + 1)
    out[:-1] += left
    out[1:] += right
    return out


def _panel_points(quad, panels):
    """Composite copies of a reference rule: points and weights on [0, 1]."""
    shifts = np.arange(panels, dtype=float)[:, None]
    pts = ((shifts + quad.points[None, :]) / panels).ravel()
    wts = np.tile(quad.weights, panels) / panels
    return pts, wts


def sine_jacobian(element_phase, h, quad=None):
    """Element block of the sine-load derivative, d(load)/d(phase).

    Integrates cos(phi(s)) N_p(s) N_q(s) with the supplied Gauss rule
    applied compositely over enough panels that each spans at most
    0.25 rad of phase swing.

    Parameters
    ----------
    element_phase : pair of floats
    h : float
    quad : QuadratureRule, optional
        Rule of degree >= 4; defaults to the minimal degree-5 rule.

    Returns
    -------
    ndarray of shape (2, 2), symmetric.
    """
    if h <= 0.0:
        raise ValueError(f"element length must be positive, got h = {h}")
    if quad is None:
        quad = gauss_rule(5)
    if quad.degree < 4:
        raise ValueError(f"need quadrature degree >= 4, got {quad.degree}")
    phi_l, phi_r = float(element_phase[0]), float(element_phase[1])
    swing = phi_r - phi_l
    panels = max(1, math.ceil(abs(swing) / _PANEL_PHASE))
    pts, wts = _panel_points(quad, panels)
    cosv = np.cos(phi_l + swing * pts)
    n1, n2 = 1.0 - pts, pts
    j11 = h * np.sum(wts * cosv * n1 * n1)
    j12 = h * np.sum(wts * cosv * n1 * n2)
    j22 = h * np.sum(wts * cosv * n2 * n2)
    return np.array([[j11, j12], [j12, j22]])


def sine_jacobian_matrix(phase, mesh, quad=None):
    """Assembled global sine Jacobian for a nodal phase vector."""
    if quad is None:
        quad = gauss_rule(5)
    if quad.degree < 4:
        raise ValueError(f"need quadrature degree >= 4, got {quad.degree}")
    phi_l, phi_r = phase[:-1], phase[1:]
    h = mesh.element_lengths
    swing = phi_r - phi_l
    panels = max(1, math.ceil(np.max(np.abs(swing), initial=0.0) / _PANEL_PHASE))
    pts, wts = _panel_points(quad, panels)
    cosv = np.cos(phi_l[:, None] + swing[:, None] * pts[None, :])
    n1, n2 = 1.0 - pts, pts
    j11 = h * (cosv @ (wts * n1 * n1))
    j12 = h * (cosv @ (wts * n1 * n2))
    j22 = h * (cosv @ (wts * n2 * n2))
    diag = np.zeros(mesh.n + 1)
    diag[:-1] += j11
    diag[1:] += j22
    return TridiagonalMatrix(lower=j12.copy(), diag=diag, upper=j12.copy())


def assemble_global(mesh, element_block):
    """Overlap-add an element block producer into a global tridiagonal.

    Parameters
    ----------
    mesh : Mesh1D
    element_block : callable
        Maps an element length to a (2, 2) block.

    Returns
    -------
    TridiagonalMatrix
    """
    n = mesh.n
    diag = np.zeros(n + 1)
    lower = np.zeros(n)
    upper = np.zeros(n)
    for i, h in enumerate(mesh.element_lengths):
        block = np.asarray(element_block(h), dtype=float)
        diag[i] += block[0, 0]
        diag[i + 1] += block[1, 1]
        lower[i] += block[1, 0]
        upper[i] += block[0, 1]
    return TridiagonalMatrix(lower=lower, diag=diag, upper=upper)


def forcing_load_vector(forcing, t, mesh, quad=None):
    """Global load of a forcing field F(z, t) against the hat basis."""
    if quad is None:
        quad = gauss_rule(5)
    h = mesh.element_lengths
    zq = mesh.nodes[:-1, None] + h[:, None] * quad.points[None, :]
    fv = np.asarray(forcing(zq, t), dtype=float)
    left = h * (fv @ (quad.weights * (1.0 - quad.points)))
    right = h * (fv @ (quad.weights * quad.points))
    out = np.zeros(mesh.n + 1)
    out[:-1] += left
    out[1:] += right
    return out


def rhs_vector(mesh, lam, abc, bbc, forcing=None, t=0.0, quad=None):
    """Global load vector: bias current, Neumann fluxes, optional forcing.

    The constant bias lam contributes lam*h to interior nodes and lam*h/2
    at the ends; the Neumann slopes enter as -abc at the left end and
    +bbc at the right end.

    Parameters
    ----------
    mesh : Mesh1D
    lam : float
        Normalized bias current density.
    abc, bbc : float
        Phase slopes at z = -10 and z = +10.
    forcing : callable, optional
        F(z, t) evaluated pointwise (vectorized in z).
    t : float, optional
        Time at which the forcing is sampled.
    quad : QuadratureRule, optional
        Rule for the forcing integral; defaults to degree 5.

    Returns
    -------
    ndarray of shape (n+1,)
    """
    h = mesh.element_lengths
    out = np.zeros(mesh.n + 1)
    out[:-1] += 0.5 * lam * h
    out[1:] += 0.5 * lam * h
    out[0] -= abc
    out[-1] += bbc
    if forcing is not None:
        out += forcing_load_vector(forcing, t, mesh, quad)
    return out

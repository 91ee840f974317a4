"""Junction parameters and their reduction to dimensionless form.

A long inline Josephson junction is described by its geometry (barrier
thickness, magnetic thickness, width, half-length), material data
(permittivity, quasiparticle conductance), critical and bias current
densities, and the fractional order alpha of the time derivative that
models the anomalous quasiparticle channel.

The solver works on the dimensionless equation

    -phi_zz + gamma2 * D_t^(2a) phi + gamma1 * D_t^a phi + sin(phi) = lam

on z in [-10, 10], with Neumann data phi_z(-10) = abc, phi_z(10) = bbc.
This module derives gamma1, gamma2, lam and the boundary slopes from the
physical inputs, and carries the dimensionless bundle around the rest of
the package.
"""

import math
from dataclasses import dataclass

from .errors import UnsupportedOrderError

# Physical constants (CODATA 2018); the flux quantum is h/(2e).
PHI0 = 2.067833848e-15    # magnetic flux quantum [Wb]
EPS0 = 8.8541878128e-12   # vacuum permittivity [F/m]
MU0 = 1.25663706212e-6    # vacuum permeability [H/m]

# Domain endpoints of the dimensionless junction axis.
Z_LEFT = -10.0
Z_RIGHT = 10.0

# Default dimensionless boundary slopes (external field + feed current of
# the reference junction) and kink velocity.
DEFAULT_ABC = 0.00189
DEFAULT_BBC = 0.00163
DEFAULT_KINK_VELOCITY = 0.9

# Supported fractional order window: the scheme needs 2*alpha in (1, 2].
ALPHA_MIN = 0.5
ALPHA_MAX = 1.0


def check_alpha(alpha):
    """Reject orders outside (0.5, 1]; the coupled scheme needs 2a in (1, 2]."""
    if not (ALPHA_MIN < alpha <= ALPHA_MAX):
        raise UnsupportedOrderError(
            f"alpha = {alpha} unsupported: need {ALPHA_MIN} < alpha <= {ALPHA_MAX}"
        )
    return float(alpha)


@dataclass(frozen=True)
class PhysicalJunctionParams:
    """Raw junction data in SI units.

    Attributes
    ----------
    d : float
        Barrier (oxide) thickness [m].
    t_b : float
        Magnetic thickness of the barrier [m].
    width : float
        Junction width [m].
    half_length : float
        Junction half-length [m]; the axis is [-half_length, half_length].
    eps : float
        Relative permittivity of the barrier.
    sigma0 : float
        Quasiparticle conductance [S].
    area : float
        Junction area [m^2].
    jc : float
        Critical current density [A/m^2].
    jbias : float
        Bias current density [A/m^2].
    alpha : float
        Fractional order of the quasiparticle time derivative, in (0.5, 1].
    i_total : float, optional
        Total feed current [A], used for the boundary slopes.
    b_ext : float, optional
        External in-plane magnetic field [T], used for the boundary slopes.
    eta : float, optional
        Time scale [s] of the fractional nondimensionalization. Defaults to
        lambda_j / cbar (the junction's own Josephson time).
    """

    d: float
    t_b: float
    width: float
    half_length: float
    eps: float
    sigma0: float
    area: float
    jc: float
    jbias: float
    alpha: float
    i_total: float | None = None
    b_ext: float | None = None
    eta: float | None = None

    def __post_init__(self):
        positive = ("d", "t_b", "width", "half_length", "eps", "area", "jc")
        for name in positive:
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.sigma0 < 0.0:
            raise ValueError(f"sigma0 must be nonnegative, got {self.sigma0}")
        if self.jbias < 0.0:
            raise ValueError(f"jbias must be nonnegative, got {self.jbias}")
        if self.eta is not None and self.eta <= 0.0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        check_alpha(self.alpha)


@dataclass(frozen=True)
class JunctionConstants:
    """Derived electrodynamic constants of a junction.

    cbar is the Swihart velocity, lambda_j the Josephson penetration depth,
    capacitance the parallel-plate value, beta = sigma0 / capacitance the
    quasiparticle damping rate.
    """

    cbar: float
    lambda_j: float
    capacitance: float
    beta: float


def derive_constants(phys):
    """Compute Swihart velocity, penetration depth, capacitance and damping.

    Parameters
    ----------
    phys : PhysicalJunctionParams

    Returns
    -------
    JunctionConstants
    """
    cbar = math.sqrt(phys.d / (phys.eps * EPS0 * MU0 * phys.t_b))
    lambda_j = math.sqrt(PHI0 / (2.0 * math.pi * MU0 * phys.t_b * phys.jc))
    capacitance = phys.eps * EPS0 * phys.area / phys.d
    beta = phys.sigma0 / capacitance
    return JunctionConstants(cbar=cbar, lambda_j=lambda_j,
                             capacitance=capacitance, beta=beta)


@dataclass(frozen=True)
class DimensionlessParams:
    """Coefficients of the dimensionless junction equation.

    gamma1 multiplies the order-alpha (quasiparticle) term, gamma2 the
    order-2*alpha (displacement) term, lam is the normalized bias current.
    abc and bbc are the Neumann slopes at z = -10 and z = +10. c is the
    kink velocity of the initial phase profile, t_final the horizon of the
    dimensionless time integration.
    """

    alpha: float = 0.9
    gamma1: float = 0.05
    gamma2: float = 5.0
    lam: float = 0.5
    abc: float = DEFAULT_ABC
    bbc: float = DEFAULT_BBC
    c: float = DEFAULT_KINK_VELOCITY
    t_final: float = 1.0


def validate(params):
    """Collect constraint violations of a DimensionlessParams bundle.

    Returns a list of human-readable violation strings, empty when the
    bundle is usable. The solver refuses to start on a non-empty list.
    """
    out = []
    if not (ALPHA_MIN < params.alpha <= ALPHA_MAX):
        out.append(
            f"alpha = {params.alpha} unsupported: need "
            f"{ALPHA_MIN} < alpha <= {ALPHA_MAX}"
        )
    if params.gamma1 < 0.0:
        out.append(f"gamma1 = {params.gamma1} must be nonnegative")
    if params.gamma2 <= 0.0:
        out.append(f"gamma2 = {params.gamma2} must be positive")
    if not (0.0 <= params.c < 1.0):
        out.append(f"c = {params.c} must lie in [0, 1)")
    if params.t_final <= 0.0:
        out.append(f"t_final = {params.t_final} must be positive")
    return out


def nondimensionalize(phys, *, c=DEFAULT_KINK_VELOCITY, t_final=1.0):
    """Reduce physical junction data to the dimensionless coefficient bundle.

    Space is scaled by lambda_j and time by eta (default lambda_j / cbar).
    The fractional damping coefficients are

        gamma1 = beta * lambda_j^(2-a) / (cbar^(2-a) * eta^(1-a))
        gamma2 = (cbar * lambda_j)^(2(1-a)) / eta^(1-a)

    and lam = jbias / jc. At alpha = 1 these collapse to the classical
    values gamma1 = beta*lambda_j/cbar and gamma2 = 1 for any eta.

    When i_total or b_ext are given, the Neumann slopes follow from the
    boundary magnetic field: (2*pi*t_b*lambda_j/PHI0) * (b_ext -+ mu0*I/(2W)),
    minus sign at z = -10. Otherwise the reference defaults are used.

    Parameters
    ----------
    phys : PhysicalJunctionParams
    c : float, optional
        Kink velocity for the initial profile.
    t_final : float, optional
        Dimensionless integration horizon.

    Returns
    -------
    DimensionlessParams
    """
    con = derive_constants(phys)
    a = check_alpha(phys.alpha)
    eta = phys.eta if phys.eta is not None else con.lambda_j / con.cbar
    gamma1 = con.beta * con.lambda_j ** (2.0 - a) / (
        con.cbar ** (2.0 - a) * eta ** (1.0 - a))
    gamma2 = (con.cbar * con.lambda_j) ** (2.0 * (1.0 - a)) / eta ** (1.0 - a)
    lam = phys.jbias / phys.jc

    if phys.i_total is not None or phys.b_ext is not None:
        b_ext = phys.b_ext if phys.b_ext is not None else 0.0
        i_total = phys.i_total if phys.i_total is not None else 0.0
        scale = 2.0 * math.pi * phys.t_b * con.lambda_j / PHI0
        feed = MU0 * i_total / (2.0 * phys.width)
        abc = scale * (b_ext - feed)
        bbc = scale * (b_ext + feed)
    else:
        abc, bbc = DEFAULT_ABC, DEFAULT_BBC

    return DimensionlessParams(alpha=a, gamma1=gamma1, gamma2=gamma2, lam=lam,
                               abc=abc, bbc=bbc, c=c, t_final=t_final)

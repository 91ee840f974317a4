"""Phase dynamics of long Josephson junctions with fractional damping.

Solves -phi_zz + gamma2 D_t^(2a) phi + gamma1 D_t^a phi + sin(phi) = lam
on z in [-10, 10] with Neumann data, using linear finite elements in space
and the L1 discretization of the Caputo derivatives in time, and verifies
the discretization by manufactured solutions.
"""

from .assembly import (TridiagonalMatrix, assemble_global, element_mass,
                       element_stiffness, rhs_vector, sine_jacobian, sine_load)
from .errors import ConfigError, StepFailureError, UnsupportedOrderError
from .fractime import (HistoryBuffer, L1Coefficients, TimeGrid,
                       discrete_caputo, l1_weights, memory_term_2alpha,
                       memory_term_alpha)
from .mesh import Mesh1D, QuadratureRule, build_mesh, gauss_rule
from .mms import (ConvergenceTable, artificial_forcing, consistent_boundary_slopes,
                  convergence_study, fabricated_solution, fit_slope,
                  kink_derivative, kink_second_derivative)
from .observables import (ObservableField, PhysicalScales, h1_error,
                          josephson_current, l2_error, magnetic_field,
                          physical_scales, voltage, voltage_at_level)
from .params import (DimensionlessParams, JunctionConstants,
                     PhysicalJunctionParams, derive_constants,
                     nondimensionalize, validate)
from .solver import (SolverConfig, SolverState, Trajectory, initial_phase,
                     initialize, run, step)

__version__ = "0.1.0"

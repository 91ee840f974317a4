"""Current, voltage, magnetic field and the error norms."""

import math

import numpy as np
import pytest

from jjphase.fractime import HistoryBuffer, TimeGrid, discrete_caputo, l1_weights
from jjphase.mesh import build_mesh, gauss_rule
from jjphase.observables import (h1_error, josephson_current, l2_error,
                                 magnetic_field, physical_scales, voltage,
                                 voltage_at_level)
from jjphase.params import PhysicalJunctionParams, derive_constants
from jjphase.solver import SolverConfig, initial_phase, run


def history_of(levels):
    hist = HistoryBuffer(levels.shape[1], levels.shape[0])
    for lv in levels:
        hist.append(lv)
    return hist


def test_current_is_sine_of_phase():
    phase = np.array([0.0, np.pi / 2.0, np.pi, 7.0])
    np.testing.assert_allclose(josephson_current(phase), np.sin(phase),
                               rtol=1e-15)


def test_voltage_of_constant_history_is_zero():
    hist = history_of(np.full((6, 5), 2.4))
    for alpha in (0.6, 0.8, 1.0):
        co = l1_weights(alpha, TimeGrid(t_final=1.0, m=5))
        np.testing.assert_array_equal(voltage(hist, co, 4), np.zeros(5))


def test_voltage_classical_limit_is_backward_difference():
    rng = np.random.default_rng(2)
    levels = rng.normal(size=(6, 4))
    hist = history_of(levels)
    grid = TimeGrid(t_final=1.0, m=5)
    co = l1_weights(1.0, grid)
    for k in range(5):
        np.testing.assert_allclose(voltage(hist, co, k),
                                   (levels[k + 1] - levels[k]) / grid.tau,
                                   rtol=1e-13, atol=1e-13)


def test_voltage_matches_standalone_caputo_operator():
    # Nodal series t_j^2 on every node: the voltage is D^a t^2 at t_{k+1}.
    m, alpha = 32, 0.75
    grid = TimeGrid(t_final=1.0, m=m)
    co = l1_weights(alpha, grid)
    series = np.outer(grid.times ** 2, np.ones(3))
    hist = history_of(series)
    k = m - 1
    got = voltage(hist, co, k)
    want = discrete_caputo(grid.times ** 2, alpha, grid.tau, k)
    np.testing.assert_allclose(got, want, rtol=1e-13)
    # And the closed form 2 t^(2-a)/Gamma(3-a) at t = 1 within the L1 error.
    exact = 2.0 / math.gamma(3.0 - alpha)
    assert abs(got[0] - exact) < 5.0 * grid.tau ** (2.0 - alpha)


def test_voltage_at_level_zero_snapshot_is_zero():
    traj = run(SolverConfig(n=16, m=8, snapshots=3))
    np.testing.assert_array_equal(voltage_at_level(traj, 0), np.zeros(17))
    top = voltage_at_level(traj, 8)
    np.testing.assert_allclose(top, voltage(traj.history, traj.coeffs, 7),
                               rtol=1e-15)


def test_voltage_requires_history_through_level():
    hist = history_of(np.zeros((3, 4)))
    co = l1_weights(0.8, TimeGrid(t_final=1.0, m=4))
    with pytest.raises(ValueError):
        voltage(hist, co, 2)


def test_magnetic_field_of_linear_phase_is_constant_slope():
    mesh = build_mesh(10)
    phase = 0.7 + 1.3 * mesh.nodes
    np.testing.assert_allclose(magnetic_field(phase, mesh), 1.3, rtol=1e-13)
    nodal = magnetic_field(phase, mesh, average=True)
    assert nodal.shape == (11,)
    np.testing.assert_allclose(nodal, 1.3, rtol=1e-13)


def test_magnetic_field_peak_of_kink_profile():
    # Max slope of 4 arctan(exp(u/s)) is 2/s = 4.5883146774112353 at u = 0.
    mesh = build_mesh(400)
    phi = initial_phase(mesh.nodes, 0.9)
    peak = magnetic_field(phi, mesh).max()
    assert peak == pytest.approx(4.5883146774112353, rel=2e-2)
    assert peak < 4.5883146774112353   # chord slope underestimates


def test_l2_error_of_interpolated_linear_function_vanishes():
    mesh = build_mesh(12)
    exact = lambda z: 0.3 * z - 2.0
    approx = exact(mesh.nodes)
    assert l2_error(approx, exact, mesh) < 1e-13
    assert h1_error(approx, exact, mesh,
                    exact_grad=lambda z: np.full_like(z, 0.3)) < 1e-12


def test_error_norms_of_unit_offset():
    # |1 - 0| over a length-20 domain: both norms are sqrt(20).
    mesh = build_mesh(25)
    ones = np.ones(26)
    zero = lambda z: np.zeros_like(z)
    want = math.sqrt(20.0)
    assert l2_error(ones, zero, mesh) == pytest.approx(want, rel=1e-13)
    assert h1_error(ones, zero, mesh,
                    exact_grad=zero) == pytest.approx(want, rel=1e-13)


def test_l2_error_matches_same_rule_composite_sum():
    # Interpolation error of sin(pi z / 10) on n = 40, recomputed by hand
    # with the identical per-element quadrature rule.
    mesh = build_mesh(40)
    exact = lambda z: np.sin(np.pi * z / 10.0)
    approx = exact(mesh.nodes)
    rule = gauss_rule(5)
    got = l2_error(approx, exact, mesh, quad=rule)

    total = 0.0
    for e in range(mesh.n):
        z0, h = mesh.nodes[e], mesh.element_lengths[e]
        zq = z0 + h * rule.points
        uh = approx[e] * (1.0 - rule.points) + approx[e + 1] * rule.points
        total += h * np.sum(rule.weights * (uh - exact(zq)) ** 2)
    assert got == pytest.approx(math.sqrt(total), rel=1e-13)


def test_l2_error_default_rule_is_adequate():
    # The default rule should land within quadrature accuracy of a 64-point
    # per-element reference integration of the same squared difference.
    mesh = build_mesh(40)
    exact = lambda z: np.sin(np.pi * z / 10.0)
    approx = exact(mesh.nodes)
    got = l2_error(approx, exact, mesh)

    gx, gw = np.polynomial.legendre.leggauss(64)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    total = 0.0
    for e in range(mesh.n):
        z0, h = mesh.nodes[e], mesh.element_lengths[e]
        zq = z0 + h * gx
        uh = approx[e] * (1.0 - gx) + approx[e + 1] * gx
        total += h * np.sum(gw * (uh - exact(zq)) ** 2)
    assert got == pytest.approx(math.sqrt(total), rel=1e-4)


def test_l2_error_decays_quadratically_under_refinement():
    exact = lambda z: np.sin(np.pi * z / 10.0)
    errs = []
    for n in (40, 80):
        mesh = build_mesh(n)
        errs.append(l2_error(exact(mesh.nodes), exact, mesh))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_error_norm_properties():
    rng = np.random.default_rng(17)
    mesh = build_mesh(20)
    u = rng.normal(size=21)
    v = rng.normal(size=21)
    zero = lambda z: np.zeros_like(z)
    # Homogeneity and triangle inequality of the induced norm.
    assert l2_error(2.0 * u, zero, mesh) == pytest.approx(
        2.0 * l2_error(u, zero, mesh), rel=1e-12)
    assert (l2_error(u + v, zero, mesh)
            <= l2_error(u, zero, mesh) + l2_error(v, zero, mesh) + 1e-12)
    # H1 dominates L2.
    assert h1_error(u, zero, mesh, exact_grad=zero) >= l2_error(u, zero, mesh)


def test_error_norms_reject_low_degree_rules():
    mesh = build_mesh(4)
    zero = lambda z: np.zeros_like(z)
    with pytest.raises(ValueError):
        l2_error(np.zeros(5), zero, mesh, quad=gauss_rule(3))
    with pytest.raises(ValueError):
        h1_error(np.zeros(5), zero, mesh, quad=gauss_rule(2))


def test_h1_error_falls_back_to_numerical_gradient():
    mesh = build_mesh(30)
    exact = lambda z: np.sin(np.pi * z / 10.0)
    grad = lambda z: (np.pi / 10.0) * np.cos(np.pi * z / 10.0)
    approx = exact(mesh.nodes)
    with_grad = h1_error(approx, exact, mesh, exact_grad=grad)
    without = h1_error(approx, exact, mesh)
    assert without == pytest.approx(with_grad, rel=1e-7)


def test_physical_scales_closed_forms():
    phys = PhysicalJunctionParams(d=1.0e-10, t_b=1.0e-7, width=5.0e-5,
                                  half_length=5.0e-4, eps=10.0, sigma0=1.0e-3,
                                  area=2.5e-8, jc=100.0, jbias=50.0,
                                  alpha=0.9, eta=1.0e-12)
    con = derive_constants(phys)
    scales = physical_scales(phys)
    # PHI0 / (2 pi eta) at eta = 1e-12 s.
    assert scales.voltage == pytest.approx(0.00032910597840193495, rel=1e-14)
    assert scales.current_density == 100.0
    assert scales.field == pytest.approx(
        2.067833848e-15 / (2.0 * np.pi * phys.t_b * con.lambda_j), rel=1e-14)
    assert scales.length == con.lambda_j
    assert scales.time == 1.0e-12


def test_physical_scales_default_time_is_josephson_time():
    phys = PhysicalJunctionParams(d=1.0e-10, t_b=1.0e-7, width=5.0e-5,
                                  half_length=5.0e-4, eps=10.0, sigma0=1.0e-3,
                                  area=2.5e-8, jc=100.0, jbias=50.0, alpha=0.9)
    con = derive_constants(phys)
    scales = physical_scales(phys)
    assert scales.time == pytest.approx(con.lambda_j / con.cbar, rel=1e-14)

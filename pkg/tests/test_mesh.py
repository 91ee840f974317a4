"""Mesh construction and reference-element Gauss rules."""

import numpy as np
import pytest
from scipy.integrate import quad

from jjphase.mesh import QuadratureRule, build_mesh, gauss_rule
from jjphase.params import Z_LEFT, Z_RIGHT


def test_nodes_follow_uniform_formula():
    mesh = build_mesh(8)
    assert mesh.n == 8
    assert mesh.h == 2.5
    np.testing.assert_array_equal(mesh.nodes, -10.0 + 2.5 * np.arange(9))
    np.testing.assert_array_equal(mesh.element_lengths, np.full(8, 2.5))
    np.testing.assert_allclose(mesh.midpoints, mesh.nodes[:-1] + 1.25)


@pytest.mark.parametrize("n", [2, 7, 40, 333])
def test_element_lengths_cover_domain(n):
    mesh = build_mesh(n)
    assert mesh.nodes[0] == Z_LEFT
    assert mesh.nodes[-1] == pytest.approx(Z_RIGHT, abs=1e-12)
    assert abs(mesh.element_lengths.sum() - (Z_RIGHT - Z_LEFT)) < 1e-12


def test_build_mesh_rejects_tiny_n():
    for n in (1, 0, -4):
        with pytest.raises(ValueError):
            build_mesh(n)


@pytest.mark.parametrize("degree", range(1, 8))
def test_gauss_rule_point_count_and_normalization(degree):
    rule = gauss_rule(degree)
    assert rule.degree >= degree
    # ceil((degree+1)/2) Gauss points integrate degree 2*npts - 1 exactly.
    npts = len(rule.points)
    assert npts == (degree + 2) // 2
    assert 2 * npts - 1 >= degree
    assert np.all((rule.points > 0.0) & (rule.points < 1.0))
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("degree", range(1, 8))
def test_gauss_rule_exact_on_monomials(degree):
    rule = gauss_rule(degree)
    for p in range(degree + 1):
        exact = 1.0 / (p + 1)  # integral of s^p over [0, 1]
        assert rule.points ** p @ rule.weights == pytest.approx(exact, abs=1e-14)


def test_gauss_rule_matches_adaptive_quadrature_on_smooth_integrand():
    # 4 points are not exact on a transcendental integrand, but the Gauss
    # error on this gentle one sits well below 1e-6.
    rule = gauss_rule(7)
    f = lambda s: np.exp(0.3 * s) * np.cos(2.0 * s)
    assert f(rule.points) @ rule.weights == pytest.approx(
        quad(f, 0.0, 1.0)[0], abs=5e-6)


def test_gauss_rule_rejects_unsupported_degree():
    for degree in (0, -1, 8, 12):
        with pytest.raises(ValueError):
            gauss_rule(degree)


def test_quadrature_rule_is_plain_container():
    rule = QuadratureRule(points=np.array([0.5]), weights=np.array([1.0]),
                          degree=1)
    assert rule.degree == 1
    assert build_mesh(20).h == 1.0

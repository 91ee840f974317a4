"""Uniform 1-D mesh on the junction axis and reference-element quadrature.

Elements are intervals [z_i, z_{i+1}] mapped to the reference interval
[0, 1]; all element integrals in the package are written as
h * sum_q w_q f(z_i + h*s_q) with points s_q and weights w_q from a
Gauss-Legendre rule rescaled to [0, 1] (weights sum to 1).
"""

import math
from dataclasses import dataclass

import numpy as np

from .params import Z_LEFT, Z_RIGHT


@dataclass(frozen=True)
class Mesh1D:
    """Uniform partition of [-10, 10] into n elements.

    nodes has length n+1 with node i at Z_LEFT + i*h; element_lengths
    holds the n consecutive differences.
    """

    n: int
    nodes: np.ndarray
    element_lengths: np.ndarray

    @property
    def h(self):
        return (Z_RIGHT - Z_LEFT) / self.n

    @property
    def midpoints(self):
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])


def build_mesh(n):
    """Build the uniform n-element mesh on [-10, 10].

    Parameters
    ----------
    n : int
        Element count, at least 2.

    Returns
    -------
    Mesh1D
    """
    if n < 2:
        raise ValueError(f"mesh needs at least 2 elements, got n = {n}")
    h = (Z_RIGHT - Z_LEFT) / n
    nodes = Z_LEFT + np.arange(n + 1, dtype=float) * h
    return Mesh1D(n=int(n), nodes=nodes, element_lengths=np.diff(nodes))


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on the reference interval [0, 1]."""

    points: np.ndarray
    weights: np.ndarray
    degree: int


def gauss_rule(degree):
    """Minimal Gauss-Legendre rule on [0, 1] exact to the given degree.

    Parameters
    ----------
    degree : int
        Polynomial exactness degree, between 1 and 7.

    Returns
    -------
    QuadratureRule
        ceil((degree+1)/2) points in (0, 1); weights sum to 1.
    """
    if not (1 <= degree <= 7):
        raise ValueError(f"quadrature degree must be in 1..7, got {degree}")
    npts = math.ceil((degree + 1) / 2)
    x, w = np.polynomial.legendre.leggauss(npts)
    return QuadratureRule(points=0.5 * (x + 1.0), weights=0.5 * w,
                          degree=int(degree))

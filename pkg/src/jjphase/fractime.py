"""L1 discretization of Caputo time derivatives and the solution history.

For order a in (0, 1) the Caputo derivative at t_{k+1} is approximated on a
uniform grid of step tau by

    D^a phi |_{t_{k+1}} ~= C_a * [ (phi^{k+1} - phi^k) + zeta_k^a ]

with C_a = tau^(-a) / Gamma(2-a), weights b_p^a = (p+1)^(1-a) - p^(1-a),
and the memory sum

    zeta_k^a = sum_{p=1..k} (phi^{k-p+1} - phi^{k-p}) * b_p^a.

The order-2a derivative (2a in (1, 2)) uses the analogous second-difference
form with b_p^{2a} = (p+1)^{2(1-a)} - p^{2(1-a)} and prefactor
C_{2a} = tau^(-2a) / Gamma(3-2a):

    zeta_k^{2a} = sum_{p=1..k} (phi^{k-p+2} - 2 phi^{k-p+1} + phi^{k-p}) * b_p^{2a}.

Both weight families are positive, strictly decreasing, and telescope:
sum_{p=1..k} b_p^a = (k+1)^(1-a) - 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .params import check_alpha


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid 0 = t_0 < ... < t_m = t_final."""

    t_final: float
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"time grid needs m >= 2 steps, got m = {self.m}")
        if self.t_final <= 0.0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")

    @property
    def tau(self):
        return self.t_final / self.m

    @property
    def times(self):
        return np.linspace(0.0, self.t_final, self.m + 1)


@dataclass(frozen=True)
class L1Coefficients:
    """Prefactors and memory weights of the two L1 operators on a grid.

    b_alpha[p-1] holds b_p^a for p = 1..m, likewise b_2alpha; a memory sum
    at step k uses the first k entries.
    """

    alpha: float
    tau: float
    c_alpha: float
    c_2alpha: float
    b_alpha: np.ndarray
    b_2alpha: np.ndarray


def l1_weights(alpha, grid):
    """L1 coefficients for orders alpha and 2*alpha on a time grid.

    Parameters
    ----------
    alpha : float
        Fractional order, in (0.5, 1] so that 2*alpha stays in (1, 2].
    grid : TimeGrid

    Returns
    -------
    L1Coefficients
    """
    a = check_alpha(alpha)
    tau = grid.tau
    p = np.arange(1, grid.m + 1, dtype=float)
    b_alpha = (p + 1.0) ** (1.0 - a) - p ** (1.0 - a)
    b_2alpha = (p + 1.0) ** (2.0 * (1.0 - a)) - p ** (2.0 * (1.0 - a))
    c_alpha = tau ** (-a) / math.gamma(2.0 - a)
    c_2alpha = tau ** (-2.0 * a) / math.gamma(3.0 - 2.0 * a)
    return L1Coefficients(alpha=a, tau=tau, c_alpha=c_alpha, c_2alpha=c_2alpha,
                          b_alpha=b_alpha, b_2alpha=b_2alpha)


class HistoryBuffer:
    """Preallocated store of nodal phase levels with cached differences.

    Keeps every accepted level phi^0 .. phi^k (the fractional memory needs
    the full history) plus running first differences d1[j] = phi^{j+1} - phi^j
    and second differences d2[q] = phi^q - 2 phi^{q-1} + phi^{q-2} (q >= 2),
    so the memory sums reduce to one dot product per operator per step.
    """

    def __init__(self, n_values, capacity):
        if capacity < 2:
            raise ValueError(f"history capacity must be >= 2, got {capacity}")
        self._levels = np.zeros((capacity, n_values))
        self._d1 = np.zeros((max(capacity - 1, 1), n_values))
        self._d2 = np.zeros((capacity, n_values))
        self._count = 0

    def __len__(self):
        return self._count

    @property
    def n_values(self):
        return self._levels.shape[1]

    @property
    def capacity(self):
        return self._levels.shape[0]

    def append(self, level):
        level = np.asarray(level, dtype=float)
        if level.shape != (self.n_values,):
            raise ValueError(
                f"level shape {level.shape} does not match buffer width "
                f"({self.n_values},)")
        k = self._count
        if k >= self.capacity:
            raise ValueError("history buffer is full")
        self._levels[k] = level
        if k >= 1:
            self._d1[k - 1] = self._levels[k] - self._levels[k - 1]
        if k >= 2:
            self._d2[k] = self._d1[k - 1] - self._d1[k - 2]
        self._count = k + 1

    def __getitem__(self, k):
        if not (0 <= k < self._count):
            raise IndexError(f"level {k} not in history (have {self._count})")
        return self._levels[k]

    @property
    def levels(self):
        """Read view of the filled (count, n_values) block."""
        return self._levels[:self._count]

    def first_differences(self, upto):
        """View of d1[0:upto], d1[j] = phi^{j+1} - phi^j."""
        if upto > self._count - 1:
            raise ValueError(
                f"need {upto} first differences, history holds {self._count} levels")
        return self._d1[:upto]

    def second_differences(self, upto):
        """View of d2[2:upto+2], d2[q] centered at level q-1, q = 2..upto+1."""
        if upto + 2 > self._count:
            raise ValueError(
                f"need second differences through level {upto + 1}, history "
                f"holds {self._count} levels")
        return self._d2[2:upto + 2]


def memory_term_alpha(history, k, coeffs):
    """Memory sum zeta_k^a of the order-alpha L1 operator.

    Requires history levels 0..k. Returns the zero vector for k = 0.

    Parameters
    ----------
    history : HistoryBuffer
    k : int
        Memory index; the operator acts at t_{k+1}.
    coeffs : L1Coefficients

    Returns
    -------
    ndarray of shape (n_values,)
    """
    if k < 0:
        raise ValueError(f"memory index must be nonnegative, got k = {k}")
    if len(history) < k + 1:
        raise ValueError(
            f"zeta_{k}^a needs levels 0..{k}, history holds {len(history)}")
    if k == 0:
        return np.zeros(history.n_values)
    # d1[j] pairs with b_{k-j}: reversed leading slice of the weights.
    w = coeffs.b_alpha[:k][::-1]
    return w @ history.first_differences(k)


def memory_term_2alpha(history, k, coeffs):
    """Memory sum zeta_k^{2a} of the order-2*alpha L1 operator.

    Requires history levels 0..k+1. Returns the zero vector for k = 0.
    """
    if k < 0:
        raise ValueError(f"memory index must be nonnegative, got k = {k}")
    if len(history) < k + 2:
        raise ValueError(
            f"zeta_{k}^2a needs levels 0..{k + 1}, history holds {len(history)}")
    if k == 0:
        return np.zeros(history.n_values)
    # d2[q] (q = 2..k+1) pairs with b_{k+2-q}.
    w = coeffs.b_2alpha[:k][::-1]
    return w @ history.second_differences(k)


def discrete_caputo(samples, alpha, tau, k):
    """L1 value of the order-alpha Caputo derivative at t_{k+1}.

    Standalone scalar-series form of the operator, used by the voltage
    observable and as an oracle; accepts the full first-order window
    alpha in (0, 1] (the coupled solver itself is restricted to (0.5, 1]).

    Parameters
    ----------
    samples : array_like
        Values phi^0 .. phi^{k+1} (at least k+2 entries; extras ignored).
        A 2-D array is treated as one series per column.
    alpha : float
    tau : float
        Grid step, positive.
    k : int
        The derivative is evaluated at t_{k+1}.

    Returns
    -------
    float or ndarray
    """
    samples = np.asarray(samples, dtype=float)
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha = {alpha} outside (0, 1]")
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if samples.shape[0] < k + 2:
        raise ValueError(
            f"need samples through level {k + 1}, got {samples.shape[0]}")
    d = np.diff(samples[:k + 2], axis=0)
    c_a = tau ** (-alpha) / math.gamma(2.0 - alpha)
    if k == 0:
        return c_a * d[0]
    p = np.arange(1, k + 1, dtype=float)
    b = (p + 1.0) ** (1.0 - alpha) - p ** (1.0 - alpha)
    zeta = b[::-1] @ d[:k]
    return c_a * (d[k] + zeta)

"""Lagrange differentiation matrices and the widened N x (N+6) boundary-DOF matrices.

The extended state vector is ordered
``[w_1 .. w_N, w'_1, w'_N, w''_1, w''_N, w'''_1, w'''_N]``.
Everything here is dtype-generic: float64 arrays or object arrays of mpf
(call inside ``mpmath.workdps`` for the latter).
"""

from dataclasses import dataclass
from math import comb, factorial

import mpmath as mp
import numpy as np

from .grid import Grid
from .linalg import solve

N_EXTRA = 6
SCHEMES = ("hermite", "chained")


@dataclass(frozen=True)
class ConventionalWeights:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray


@dataclass(frozen=True)
class ModifiedWeightSet:
    """Derivative matrices of orders 1..8 acting on the extended state vector."""
    abar: np.ndarray
    bbar: np.ndarray
    cbar: np.ndarray
    dbar: np.ndarray
    ebar: np.ndarray
    fbar: np.ndarray
    gbar: np.ndarray
    hbar: np.ndarray
    v: np.ndarray
    y: np.ndarray
    scheme: str

    @property
    def n_points(self):
        return self.abar.shape[0]

    def order(self, m):
        """Matrix for derivative order m (1..8)."""
        return (self.abar, self.bbar, self.cbar, self.dbar,
                self.ebar, self.fbar, self.gbar, self.hbar)[m - 1]


def _coords(grid):
    return grid.coords if isinstance(grid, Grid) else np.asarray(grid)


def _is_mp(x):
    return x.dtype == object


def first_derivative_matrix(grid):
    """First-order Lagrange weighting coefficients on the grid nodes."""
    x = _coords(grid)
    n = len(x)
    dx = np.subtract.outer(x, x)
    one = mp.mpf(1) if _is_mp(x) else 1.0
    off = dx + np.eye(n, dtype=x.dtype) * one  # unit diagonal so products skip it
    c = np.prod(off, axis=1)
    a = np.outer(c, 1 / c) / off
    for i in range(n):
        a[i, i] = sum(one / dx[i, k] for k in range(n) if k != i)
    return a


def conventional_matrices(a):
    b = a @ a
    c = b @ a
    return ConventionalWeights(a, b, c, b @ b)


def extend_state(values, end_derivs):
    """Stack nodal values with (w'_1, w'_N, w''_1, w''_N, w'''_1, w'''_N)."""
    values = np.asarray(values)
    end_derivs = np.asarray(end_derivs)
    if end_derivs.shape != (N_EXTRA,):
        raise ValueError(f"expected {N_EXTRA} end derivatives, got {end_derivs.shape}")
    return np.concatenate([values, end_derivs])


def dof_columns(n, order):
    """Columns of the two end DOFs for derivative order 1, 2 or 3."""
    return n + 2 * (order - 1), n + 2 * (order - 1) + 1


def _widen(op, n):
    out = np.zeros((n, n + N_EXTRA), dtype=op.dtype)
    if op.dtype == object:
        out[:] = mp.mpf(0)
    out[:, :n] = op
    return out


def _field(op, n, order):
    """Nodal derivative field whose end rows are replaced by the end DOFs."""
    f = _widen(op, n)
    one = f[0, 0] * 0 + 1
    for row, col in zip((0, n - 1), dof_columns(n, order)):
        f[row] = f[row] * 0
        f[row, col] = one
    return f


def _ends(interior, boundary):
    out = interior.copy()
    out[[0, -1]] = boundary[[0, -1]]
    return out


def modified_matrices(grid):
    """Chained modified weighting coefficients built from products of A.

    End rows of the second, third, fifth and seventh order intermediates use
    sums over interior nodes only, with the end-node weights moved onto the
    slope, curvature and triple-derivative columns respectively.
    """
    x = _coords(grid)
    n = len(x)
    cw = conventional_matrices(first_derivative_matrix(x))
    a, b, c = cw.a, cw.b, cw.c
    f1, f2, f3 = _field(a, n, 1), _field(b, n, 2), _field(c, n, 3)

    abar = _widen(a, n)
    bbar = _ends(_widen(b, n), a @ f1)
    cbar = _ends(_widen(c, n), a @ f2)
    dbar = b @ bbar
    v = _ends(dbar, b @ f2)
    etilde = c @ cbar
    y = _ends(etilde, c @ f3)
    return ModifiedWeightSet(abar, bbar, cbar, dbar, a @ v, b @ v, a @ y, b @ y,
                             v, y, "chained")


def _omega_derivatives(x, kmax):
    """d^k/dx^k of prod_j (x - x_j) at every node, k = 0..kmax."""
    n = len(x)
    out = np.empty((n, kmax + 1), dtype=x.dtype)
    for i in range(n):
        coef = np.zeros(kmax + 1, dtype=x.dtype)
        coef[:] = x[0] * 0
        coef[0] = coef[0] + 1
        for j in range(n):
            shift = x[i] - x[j]
            nxt = coef * shift
            nxt[1:] = nxt[1:] + coef[:-1]
            coef = nxt
        out[i] = [coef[k] * factorial(k) for k in range(kmax + 1)]
    return out


def _monomial_derivative(t, p, k):
    """d^k/dt^k of t^p evaluated at t."""
    if k > p:
        return t * 0
    return t ** (p - k) * (factorial(p) // factorial(p - k))


def hermite_matrices(grid, max_order=8):
    """Generalized Hermite weighting coefficients on the extended state vector.

    The interpolant is p(x) = sum_j w_j l_j(x) + omega(x) r(x), where l_j is the
    Lagrange basis, omega(x) = prod_j (x - x_j) and r is a quintic fixed by the
    six end-derivative DOFs. Row i of the order-m matrix gives p^(m)(x_i).
    """
    x = _coords(grid)
    n = len(x)
    cw = conventional_matrices(first_derivative_matrix(x))
    conv = [None, cw.a]
    for _ in range(2, max_order + 1):
        conv.append(conv[-1] @ cw.a)
    om = _omega_derivatives(x, max_order)
    half = (x[-1] - x[0]) / 2
    t = (x - x[0]) / half - 1  # map to [-1, 1] for the quintic

    def corr(m, i):
        # d^m/dx^m of omega(x) * t^p at node i for p = 0..5
        row = []
        for p in range(N_EXTRA):
            s = x[0] * 0
            for k in range(m + 1):
                s = s + comb(m, k) * om[i, k] * _monomial_derivative(t[i], p, m - k) / half ** (m - k)
            row.append(s)
        return row

    ends = (0, n - 1)
    mat = np.array([corr(m, e) for m in (1, 2, 3) for e in ends], dtype=x.dtype)
    lag = np.array([conv[m][e] for m in (1, 2, 3) for e in ends], dtype=x.dtype)
    rhs = np.concatenate([-lag, np.eye(N_EXTRA, dtype=x.dtype) * (x[0] * 0 + 1)], axis=1)
    coef = solve(mat, rhs)  # quintic coefficients per unit of each extended DOF

    mats = []
    for m in range(1, max_order + 1):
        rm = np.array([corr(m, i) for i in range(n)], dtype=x.dtype)
        mats.append(_widen(conv[m], n) + rm @ coef)
    return ModifiedWeightSet(*mats, mats[3], mats[5], "hermite")


def build_weights(grid, scheme="hermite"):
    if scheme == "hermite":
        return hermite_matrices(grid)
    if scheme == "chained":
        return modified_matrices(grid)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


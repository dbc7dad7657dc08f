"""Closed-form reference solutions built on exponential bases.

Boundary rows are produced by applying the eight boundary operators to each
basis function, so every support kind shares one code path. Exponentials are
anchored at the end where they are largest, e^{k(x - L)} for Re k > 0 and
e^{k x} otherwise, which keeps all entries bounded by one.
"""

import warnings
from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize_scalar

from .model import LEFT, RIGHT, Essential, Natural, SupportKind, boundary_condition_set

DROP_DECADES = 6.0
SCAN_STEP = 0.25
MAX_ORDER = 8


class OracleError(RuntimeError):
    pass


def _derivs_exp(k, x, x0, order):
    """[d^j/dx^j e^{k (x - x0)}] for j = 0..order."""
    e = np.exp(k * (x - x0))
    return np.array([k ** j * e for j in range(order + 1)])


def _derivs_poly(p, x, order):
    """[d^j/dx^j x^p] for j = 0..order."""
    return np.array([factorial(p) / factorial(p - j) * x ** (p - j) if j <= p else 0.0
                     for j in range(order + 1)])


def apply_condition(cond, d, EI, g1, g2, P=0.0):
    """Evaluate one boundary descriptor on a derivative list d[0..7].

    The shear carries the axial contribution P w' when P is non-zero.
    """
    if isinstance(cond, Essential):
        return d[cond.order]
    f = cond.force
    if f == "V":
        return EI * (d[3] - g1 ** 2 * d[5] + g2 ** 4 * d[7]) + P * d[1]
    if f == "M":
        return EI * (d[2] - g1 ** 2 * d[4] + g2 ** 4 * d[6])
    if f == "Mbar":
        return EI * (g1 ** 2 * d[3] - g2 ** 4 * d[5])
    if f == "Mbbar":
        return EI * g2 ** 4 * d[4]
    raise ValueError(f"unknown force {f!r}")


class _Basis:
    """Polynomial powers plus anchored exponentials on [0, L]."""

    def __init__(self, powers, exponents, L):
        self.powers = tuple(powers)
        self.k = np.asarray(exponents, dtype=complex)
        self.L = L
        self.anchor = np.where(self.k.real > 0, L, 0.0)

    def __len__(self):
        return len(self.powers) + len(self.k)

    def derivs(self, x, order=MAX_ORDER):
        """(n_basis, order + 1) array of derivatives at x."""
        rows = [_derivs_poly(p, x, order) for p in self.powers]
        rows += [_derivs_exp(k, x, a, order) for k, a in zip(self.k, self.anchor)]
        return np.array(rows, dtype=complex)

    def boundary_matrix(self, kind, EI, g1, g2, P=0.0):
        ends = {LEFT: self.derivs(0.0), RIGHT: self.derivs(self.L)}
        return np.array([[apply_condition(c, d, EI, g1, g2, P) for d in ends[e]]
                         for e, c in boundary_condition_set(kind)])


def confluence_log_factor(exponents):
    """log prod_{i<j} |k_i - k_j|.

    Two coalescing exponents make two basis columns equal and the determinant
    vanish without a true root; dividing by this product removes that zero.
    """
    k = np.asarray(exponents, dtype=complex)
    i, j = np.triu_indices(len(k), 1)
    return float(np.sum(np.log(np.abs(k[i] - k[j]))))


# ---------------------------------------------------------------- statics

def static_roots(g1, g2):
    """(n1, n2, m1, m2) of the homogeneous static solution."""
    if g2 <= 0 or not g1 > sqrt(2.0) * g2:
        raise OracleError("static oracle needs g2 > 0 and g1 > sqrt(2) g2")
    disc = sqrt(g1 ** 4 - 4.0 * g2 ** 4)
    n1 = sqrt((g1 ** 2 + disc) / (2.0 * g2 ** 4))
    m1 = sqrt((g1 ** 2 - disc) / (2.0 * g2 ** 4))
    return n1, -n1, m1, -m1


@dataclass(frozen=True)
class ExactStatic:
    basis: _Basis
    coef: np.ndarray
    EI: float
    q: float
    g1: float
    g2: float

    def deriv(self, x, order=0):
        """d^order w / dx^order at x (scalar or array), order <= 8."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        hom = np.array([(self.coef @ self.basis.derivs(xi)[:, order]).real for xi in x])
        part = np.array([_derivs_poly(4, xi, MAX_ORDER)[order] for xi in x])
        return hom + part * self.q / (24.0 * self.EI)

    def derivs_at(self, x):
        return np.array([self.deriv(x, j)[0] for j in range(MAX_ORDER + 1)])

    def force(self, name, x):
        return apply_condition(Natural(name), self.derivs_at(x), self.EI, self.g1, self.g2)

    def operator_residual(self, x):
        """EI (w'''' - g1^2 w^vi + g2^4 w^viii) - q at x."""
        d4, d6, d8 = (self.deriv(x, j) for j in (4, 6, 8))
        return self.EI * (d4 - self.g1 ** 2 * d6 + self.g2 ** 4 * d8) - self.q


def exact_static(kind, EI, g1, g2, L=1.0, q=1.0):
    kind = SupportKind(kind)
    if kind is SupportKind.FREE_FREE:
        raise OracleError("free-free beam has no static solution")
    n1, n2, m1, m2 = static_roots(g1, g2)
    basis = _Basis((0, 1, 2, 3), (n1, n2, m1, m2), L)
    k = basis.boundary_matrix(kind, EI, g1, g2)
    # particular solution q x^4 / (24 EI) moved to the right side
    part = {e: _derivs_poly(4, x, MAX_ORDER) * q / (24.0 * EI) for e, x in ((LEFT, 0.0), (RIGHT, L))}
    rhs = -np.array([apply_condition(c, part[e], EI, g1, g2) for e, c in boundary_condition_set(kind)])
    try:
        coef = np.linalg.solve(k, rhs)
    except np.linalg.LinAlgError as exc:
        raise OracleError("singular static boundary matrix") from exc
    return ExactStatic(basis, coef, EI, q, g1, g2)


# ---------------------------------------------------------- determinant scan

def scaled_log_det(matrix):
    """(log|det|, arg det) through LU with partial pivoting; -inf when singular."""
    m = np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise OracleError("non-finite matrix entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)  # exact singularity is reported below
        lu, piv = sla.lu_factor(m, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return -np.inf, 0.0
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    phase = np.sum(np.angle(diag)) + np.pi * swaps
    return float(np.sum(np.log(np.abs(diag)))), float(np.angle(np.exp(1j * phase)))


def _column_scale(m, policy):
    if policy == "end":
        return m
    if policy == "max":
        s = np.abs(m).max(axis=0)
        s[s == 0] = 1.0
        return m / s
    raise ValueError(f"unknown scaling policy {policy!r}")


def _scan(fn, lo, hi, step, count=None):
    """Refined local minima of fn that fall DROP_DECADES below their neighbours."""
    grid = np.arange(lo, hi + 0.5 * step, step)
    roots = []
    window = []  # last three (t, fn(t)) pairs; evaluation stops once count roots are found
    for t in grid:
        window = (window + [(t, fn(t))])[-3:]
        if len(window) < 3:
            continue
        (ta, va), (tb, vb), (tc, vc) = window
        if not (vb <= va and vb <= vc):
            continue
        res = minimize_scalar(fn, bracket=(ta, tb, tc), method="golden", tol=1e-12)
        deep = min(va, vc) - res.fun >= DROP_DECADES * np.log(10.0)
        if deep and ta <= res.x <= tc:
            roots.append(float(res.x))
            if count is not None and len(roots) >= count:
                break
    return roots


@dataclass(frozen=True)
class RootList:
    values: list
    shortfall: int = 0


# ---------------------------------------------------------------- vibration

def vibration_char_roots(omega, EI, m, g1, g2):
    """Eight roots of g2^4 k^8 - g1^2 k^6 + k^4 - omega^2 / beta^2 = 0.

    Solved as a quartic in z = k^2 by companion-matrix eigenvalues.
    """
    if g2 <= 0:
        raise OracleError("characteristic polynomial degenerates for g2 = 0")
    z = np.roots([g2 ** 4, -g1 ** 2, 1.0, 0.0, -omega ** 2 * m / EI]).astype(complex)
    k = np.sqrt(z)
    return np.concatenate([k, -k])


def frequency_matrix(kind, omega, EI, m, g1, g2, L=1.0, scaling="end"):
    k = vibration_char_roots(omega, EI, m, g1, g2)
    return _column_scale(_Basis((), k, L).boundary_matrix(kind, EI, g1, g2), scaling), k


def exact_frequencies(kind, EI, m, g1, g2, L=1.0, count=6, scan_max=5000.0,
                      step=SCAN_STEP, scaling="end"):
    """First `count` nondimensional frequencies from the determinant search."""
    kind = SupportKind(kind)
    if kind is SupportKind.PROPPED:
        raise OracleError("no vibration oracle for the propped cantilever")
    to_omega = sqrt(EI / m) / L ** 2

    def logdet(wbar):
        mat, k = frequency_matrix(kind, wbar * to_omega, EI, m, g1, g2, L, scaling)
        return scaled_log_det(mat)[0] - confluence_log_factor(k)

    roots = _scan(logdet, 0.1, scan_max, step, count)
    return RootList(roots[:count], max(0, count - len(roots)))


# ---------------------------------------------------------------- buckling

def buckling_char_roots(P, EI, g1, g2):
    """Six exponents +-sqrt(u), u solving g2^4 u^3 - g1^2 u^2 + u + P/EI = 0."""
    if g2 <= 0:
        raise OracleError("characteristic cubic degenerates for g2 = 0")
    u = np.roots([g2 ** 4, -g1 ** 2, 1.0, P / EI]).astype(complex)
    s = np.sqrt(u)
    return np.concatenate([s, -s]), u


def buckling_matrix(kind, P, EI, g1, g2, L=1.0, scaling="end"):
    s, _ = buckling_char_roots(P, EI, g1, g2)
    basis = _Basis((0, 1), s, L)
    return _column_scale(basis.boundary_matrix(kind, EI, g1, g2, P), scaling), s


def exact_buckling(kind, EI, g1, g2, L=1.0, scan_max=300.0, step=SCAN_STEP, scaling="end"):
    """Smallest nondimensional critical load from the determinant search."""
    kind = SupportKind(kind)
    if kind is SupportKind.FREE_FREE:
        raise OracleError("free-free beam has no buckling oracle")

    def logdet(pbar):
        mat, s = buckling_matrix(kind, pbar * EI / L ** 2, EI, g1, g2, L, scaling)
        return scaled_log_det(mat)[0] - confluence_log_factor(s)

    roots = _scan(logdet, 0.1, scan_max, step, 1)
    if not roots:
        raise OracleError(f"no buckling load below {scan_max}")
    return roots[0]

"""Collocation system for one beam element: interior rows, boundary rows, partition."""

from dataclasses import dataclass

import mpmath as mp
import numpy as np

from . import linalg
from .diffmat import N_EXTRA, build_weights, dof_columns
from .grid import make_grid
from .model import (LEFT, Buckling, Essential, Natural, Static, SupportKind,
                    boundary_condition_set)

COND_WARN = 1e12


class AssemblyError(RuntimeError):
    pass


def boundary_dofs(n):
    """Extended-vector indices of {w_1, w_N, w'_1, w'_N, w''_1, w''_N, w'''_1, w'''_N}."""
    return np.array([0, n - 1] + list(range(n, n + N_EXTRA)))


def domain_dofs(n):
    return np.arange(1, n - 1)


def _end_index(end, n):
    return 0 if end == LEFT else n - 1


def _num(value, like):
    """Cast a float parameter to the dtype of the weight matrices."""
    return mp.mpf(value) if like.dtype == object else float(value)


def interior_rows(mw, EI, g1, g2):
    """EI (D - g1^2 F + g2^4 H) on the interior nodes, (N-2) x (N+6)."""
    EI, g1, g2 = (_num(v, mw.abar) for v in (EI, g1, g2))
    return (EI * (mw.dbar - g1 ** 2 * mw.fbar + g2 ** 4 * mw.hbar))[1:-1]


def boundary_force_row(mw, EI, g1, g2, force, end):
    """Row giving the end force V, M, Mbar or Mbbar at the left or right node."""
    i = _end_index(end, mw.n_points)
    EI, g1, g2 = (_num(v, mw.abar) for v in (EI, g1, g2))
    d = lambda m: mw.order(m)[i]  # noqa: E731
    if force == "V":
        return EI * (d(3) - g1 ** 2 * d(5) + g2 ** 4 * d(7))
    if force == "M":
        return EI * (d(2) - g1 ** 2 * d(4) + g2 ** 4 * d(6))
    if force == "Mbar":
        return EI * (g1 ** 2 * d(3) - g2 ** 4 * d(5))
    if force == "Mbbar":
        return EI * g2 ** 4 * d(4)
    raise ValueError(f"unknown force {force!r}")


@dataclass(frozen=True)
class PartitionedSystem:
    k: np.ndarray       # full (N+6) x (N+6), rows = 8 boundary equations then N-2 interior
    f: np.ndarray
    g: np.ndarray
    mass: np.ndarray    # diagonal of the interior mass
    n_points: int

    def _split(self, a):
        n = self.n_points
        b, d = boundary_dofs(n), domain_dofs(n)
        return (a[:8][:, b], a[:8][:, d], a[8:][:, b], a[8:][:, d])

    @property
    def blocks(self):
        """(k_bb, k_bd, k_db, k_dd)."""
        return self._split(self.k)

    @property
    def g_blocks(self):
        return self._split(self.g)

    @property
    def f_b(self):
        return self.f[:8]

    @property
    def f_d(self):
        return self.f[8:]

    @property
    def geometric_boundary_free(self):
        return all(v == 0 for v in self.g[:8].ravel())


def assemble(case, mw=None):
    """Build the partitioned system for a BeamCase inside its working precision."""
    if case.kind is SupportKind.FREE_FREE and isinstance(case.load, Static):
        raise AssemblyError("free-free beam under static load has rigid-body modes")
    n = case.n_points
    with mp.workdps(case.precision):
        if mw is None:
            mw = build_weights(make_grid(n, case.props.L, case.precision), case.scheme)
        EI, (g1, g2) = case.props.EI, (case.scales.g1, case.scales.g2)
        size = n + N_EXTRA
        zero = _num(0, mw.abar)
        k = np.full((size, size), zero, dtype=mw.abar.dtype)
        g = k.copy()
        f = np.full(size, zero, dtype=mw.abar.dtype)
        for r, (end, cond) in enumerate(boundary_condition_set(case.kind)):
            i = _end_index(end, n)
            if isinstance(cond, Essential):
                col = i if cond.order == 0 else dof_columns(n, cond.order)[i != 0]
                k[r, col] = zero + 1
            elif isinstance(cond, Natural):
                k[r] = boundary_force_row(mw, EI, g1, g2, cond.force, end)
                if cond.force == "V":
                    # axial load adds P w' to the end shear
                    g[r, dof_columns(n, 1)[i != 0]] = zero - 1
        k[8:] = interior_rows(mw, EI, g1, g2)
        g[8:] = -mw.bbar[1:-1]
        if isinstance(case.load, Static):
            f[8:] = _num(case.load.q, mw.abar)
        mass = np.full(n - 2, _num(case.props.m, mw.abar), dtype=mw.abar.dtype)
    return PartitionedSystem(k, f, g, mass, n), mw


@dataclass(frozen=True)
class Condensed:
    k_red: np.ndarray
    g_red: np.ndarray
    f_red: np.ndarray
    recover: np.ndarray   # Delta_b = recover_f - recover @ Delta_d
    recover_f: np.ndarray
    kbb_cond: float


def condense(system, dps):
    """Eliminate the 8 boundary DOFs by the Schur complement of k_bb."""
    with mp.workdps(dps):
        kbb, kbd, kdb, kdd = system.blocks
        gbb, gbd, gdb, gdd = system.g_blocks
        c = linalg.cond(kbb)
        try:
            x = linalg.solve(kbb, kbd)
            xf = linalg.solve(kbb, system.f_b)
        except (ZeroDivisionError, np.linalg.LinAlgError) as exc:
            raise AssemblyError("singular k_bb: inconsistent boundary conditions") from exc
        return Condensed(kdd - kdb @ x, gdd - gdb @ x, system.f_d - kdb @ xf, x, xf, c)

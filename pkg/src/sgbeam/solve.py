"""Static, free-vibration and buckling analyses on the condensed system."""

import warnings
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from . import linalg
from .assembly import COND_WARN, assemble, boundary_dofs, boundary_force_row, condense, domain_dofs
from .grid import make_grid
from .model import FORCES, LEFT, RIGHT, Buckling, Static, SupportKind, Vibration, nondimensionalize

IMAG_TOL = 1e-6
RIGID_TOL = 1e-3


class SolverError(RuntimeError):
    pass


class IllPosedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class StaticSolution:
    x: np.ndarray
    wbar: np.ndarray          # extended state vector, float64
    derivs: np.ndarray        # rows: w, w', w'', w''' at the nodes
    forces: dict              # {(force, end): value}
    residual: float           # |K wbar - f| / |f|

    @property
    def n_points(self):
        return len(self.x)


@dataclass(frozen=True)
class ModalResult:
    frequencies: np.ndarray   # nondimensional, ascending
    discarded_count: int


@dataclass(frozen=True)
class BucklingResult:
    critical_load: float      # nondimensional
    loads: np.ndarray         # all retained positive real loads, ascending
    spectrum_size: int


def _real_positive(vals):
    vals = np.asarray(vals, dtype=complex)
    keep = np.abs(vals.imag) <= IMAG_TOL * np.abs(vals)
    real = vals[keep].real
    return np.sort(real[real > 0]), int(len(vals) - np.count_nonzero(keep))


def _prepare(case, load_type):
    if not isinstance(case.load, load_type):
        raise SolverError(f"{load_type.__name__} load case expected, got {type(case.load).__name__}")
    system, mw = assemble(case)
    red = condense(system, case.precision)
    if red.kbb_cond > COND_WARN:
        warnings.warn(f"k_bb condition number {red.kbb_cond:.2e}", IllPosedWarning, stacklevel=3)
    return system, mw, red


def solve_static(case):
    system, mw, red = _prepare(case, Static)
    n = case.n_points
    with mp.workdps(case.precision):
        try:
            dd = linalg.solve(red.k_red, red.f_red)
        except (ZeroDivisionError, np.linalg.LinAlgError) as exc:
            raise SolverError("singular reduced stiffness") from exc
        wbar = np.empty(n + 6, dtype=dd.dtype)
        wbar[domain_dofs(n)] = dd
        wbar[boundary_dofs(n)] = red.recover_f - red.recover @ dd
        derivs = np.array([wbar[:n]] + [mw.order(m) @ wbar for m in (1, 2, 3)])
        forces = {(f, e): boundary_force_row(mw, case.props.EI, case.scales.g1, case.scales.g2, f, e) @ wbar
                  for f in FORCES for e in (LEFT, RIGHT)}
        res = system.k @ wbar - system.f
        fn = max(abs(v) for v in system.f) or 1
        residual = float(max(abs(v) for v in res) / fn)
    x = make_grid(n, case.props.L).coords
    return StaticSolution(x, linalg.to_float(wbar), linalg.to_float(derivs),
                          {k: float(v) for k, v in forces.items()}, residual)


def solve_modal(case):
    system, mw, red = _prepare(case, Vibration)
    with mp.workdps(case.precision):
        a = red.k_red / system.mass[:, None]
        lam = linalg.eigvals(a)
    lam = np.asarray(lam, dtype=complex)
    # rigid-body modes sit near zero with either sign; classify them before the sign filter
    rigid = nondimensionalize("frequency", np.sqrt(np.abs(lam)), case.props) < RIGID_TOL
    elastic, _ = _real_positive(lam[~rigid])
    dropped = len(lam) - len(elastic)
    omega = nondimensionalize("frequency", np.sqrt(elastic), case.props)
    count = case.load.mode_count
    if len(omega) < count:
        raise SolverError(f"only {len(omega)} real modes found, {count} requested")
    return ModalResult(omega[:count], dropped)


def solve_buckling(case):
    """Smallest positive real P with K w = P G w.

    When the geometric matrix has no boundary rows the condensed pencil is
    used; otherwise (free end shear carries P w') the full system is reduced
    through K^-1 G.
    """
    system, mw, red = _prepare(case, Buckling)
    with mp.workdps(case.precision):
        if system.geometric_boundary_free:
            mu = linalg.eigvals(linalg.solve(red.k_red, red.g_red))
        else:
            mu = linalg.eigvals(linalg.solve(system.k, system.g))
    mu = mu[np.abs(mu) > 1e-30 * max(np.abs(mu).max(), 1e-300)]
    loads, _ = _real_positive(1.0 / mu)
    if len(loads) == 0:
        raise SolverError("no positive real buckling load")
    loads = nondimensionalize("buckling_load", loads, case.props)
    return BucklingResult(float(loads[0]), loads, len(mu))


def station_values(solution, case):
    """Nondimensional w, w', w''L, w'''L^2 at the nodes."""
    p, q = case.props, case.load.q
    w, w1, w2, w3 = solution.derivs
    return {
        "x": solution.x / p.L,
        "deflection": nondimensionalize("deflection", w, p, q),
        "slope": nondimensionalize("slope", w1, p, q),
        "curvature": nondimensionalize("curvature", w2, p, q),
        "triple_derivative": nondimensionalize("triple_derivative", w3, p, q),
    }


ANALYSES = {"static": (Static, solve_static), "vibrate": (Vibration, solve_modal),
            "buckle": (Buckling, solve_buckling)}
__all__ = ["solve_static", "solve_modal", "solve_buckling", "station_values", "SupportKind"]

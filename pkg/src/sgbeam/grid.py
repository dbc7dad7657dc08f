"""Gauss-Lobatto-Chebyshev collocation grid."""

from dataclasses import dataclass

import mpmath as mp
import numpy as np

MIN_POINTS = 3


class GridSizeError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    n_points: int
    length: float
    coords: np.ndarray  # float64 or object array of mpf


def make_grid(n_points, length=1.0, dps=None):
    """Return the N-point Gauss-Lobatto-Chebyshev grid on [0, length].

    With ``dps`` set the coordinates are mpf values computed at that many
    decimal digits; otherwise float64. End points are exactly 0 and L.
    """
    if int(n_points) != n_points or n_points < MIN_POINTS:
        raise GridSizeError(f"need at least {MIN_POINTS} grid points, got {n_points}")
    if not length > 0:
        raise GridSizeError(f"length must be positive, got {length}")
    n = int(n_points)
    if dps is None:
        i = np.arange(n)
        x = 0.5 * length * (1.0 - np.cos(i * np.pi / (n - 1)))
        x[0], x[-1] = 0.0, float(length)
    else:
        with mp.workdps(dps):
            L = mp.mpf(length)
            x = np.array([L / 2 * (1 - mp.cos(i * mp.pi / (n - 1))) for i in range(n)], dtype=object)
            x[0], x[-1] = mp.mpf(0), L
    return Grid(n, float(length), x)

"""Dense linear algebra that accepts float64 or mpf object arrays."""

import mpmath as mp
import numpy as np
import scipy.linalg as sla


def is_mp(a):
    return np.asarray(a).dtype == object


def to_mp(a):
    return mp.matrix(np.asarray(a).tolist())


def from_mp(m, shape):
    return np.array(m.tolist(), dtype=object).reshape(shape)


def solve(a, b):
    """Solve a x = b by LU with partial pivoting; b may be a vector or a matrix."""
    a, b = np.asarray(a), np.asarray(b)
    if not is_mp(a):
        return np.linalg.solve(a, b)
    if b.ndim == 1:
        return from_mp(mp.lu_solve(to_mp(a), to_mp(b.reshape(-1, 1))), b.shape)
    return from_mp(mp.inverse(to_mp(a)) * to_mp(b), b.shape)


def eigvals(a):
    """All eigenvalues, ordered by (real, imag)."""
    a = np.asarray(a)
    if is_mp(a):
        ev = mp.eig(to_mp(a), left=False, right=False)
        ev = np.array([complex(e) for e in ev])
    else:
        ev = np.linalg.eigvals(a)
    return ev[np.lexsort((ev.imag, ev.real))]


def cond(a):
    """2-norm condition number after scaling every row to unit max-norm."""
    a = np.array(np.asarray(a).tolist(), dtype=float)
    scale = np.abs(a).max(axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    return np.linalg.cond(a / scale)


def to_float(a):
    return np.asarray(a).astype(float)


def residual_check(a, vals, vecs):
    """Max relative residual |A v - lambda v| / (|A| |v|) over the given pairs."""
    norm = sla.norm(a)
    res = [np.linalg.norm(a @ v - lam * v) / (norm * np.linalg.norm(v)) for lam, v in zip(vals, vecs)]
    return max(res) if res else 0.0

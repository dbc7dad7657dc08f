"""Beam description, boundary-condition catalog and nondimensional reporting."""

from dataclasses import dataclass, field
from enum import Enum
from math import log10, sqrt

# Section used for the default numbers: b = 1, h = 0.1, rho = 1.
DEFAULT_E = 3.0e6
DEFAULT_I = 1.0 / 12000.0
DEFAULT_M = 0.1
DEFAULT_L = 1.0
DEFAULT_Q = 1.0

# The element needs at least one interior collocation row per end triple.
ELEMENT_MIN_POINTS = 5

LEFT, RIGHT = "left", "right"
FORCES = ("V", "M", "Mbar", "Mbbar")


@dataclass(frozen=True)
class BeamProperties:
    E: float = DEFAULT_E
    I: float = DEFAULT_I
    m: float = DEFAULT_M
    L: float = DEFAULT_L

    def __post_init__(self):
        for name in ("E", "I", "m", "L"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def EI(self):
        return self.E * self.I

    @property
    def beta_sq(self):
        return self.EI / self.m


@dataclass(frozen=True)
class LengthScales:
    g1: float
    g2: float

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("length scales must be non-negative")

    @classmethod
    def from_ratios(cls, r1, r2, L):
        return cls(r1 * L, r2 * L)

    @property
    def oracle_eligible(self):
        """Real distinct static roots need g1 > sqrt(2) g2."""
        return self.g1 > sqrt(2.0) * self.g2


class SupportKind(Enum):
    SS = "ss"
    CLAMPED = "clamped"
    CANTILEVER = "cantilever"
    PROPPED = "propped"
    FREE_FREE = "free-free"


@dataclass(frozen=True)
class Essential:
    """Zero value of w (order 0) or of its first, second or third derivative."""
    order: int


@dataclass(frozen=True)
class Natural:
    """Zero value of an end force: V, M, Mbar (double moment) or Mbbar (triple moment)."""
    force: str


_SIMPLE = (Essential(0), Natural("M"), Essential(2), Essential(3))
_FIXED = (Essential(0), Essential(1), Essential(2), Essential(3))
_FREE = (Natural("V"), Natural("M"), Natural("Mbar"), Natural("Mbbar"))

_CATALOG = {
    SupportKind.SS: (_SIMPLE, _SIMPLE),
    SupportKind.CLAMPED: (_FIXED, _FIXED),
    SupportKind.CANTILEVER: (_FIXED, _FREE),
    SupportKind.PROPPED: (_FIXED, _SIMPLE),
    SupportKind.FREE_FREE: (_FREE, _FREE),
}


def boundary_condition_set(kind):
    """Eight (end, descriptor) pairs, four per end."""
    left, right = _CATALOG[SupportKind(kind)]
    return tuple((LEFT, c) for c in left) + tuple((RIGHT, c) for c in right)


@dataclass(frozen=True)
class Static:
    q: float = DEFAULT_Q


@dataclass(frozen=True)
class Vibration:
    mode_count: int = 6

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be at least 1")


@dataclass(frozen=True)
class Buckling:
    pass


@dataclass(frozen=True)
class BeamCase:
    kind: SupportKind
    scales: LengthScales
    props: BeamProperties = field(default_factory=BeamProperties)
    load: object = field(default_factory=Static)
    n_points: int = 21
    scheme: str = "hermite"
    dps: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SupportKind(self.kind))
        if int(self.n_points) != self.n_points or self.n_points < ELEMENT_MIN_POINTS:
            raise ValueError(f"element needs at least {ELEMENT_MIN_POINTS} points, got {self.n_points}")

    @property
    def precision(self):
        """Working decimal digits; the eighth-order operator loses about 16 log10(N) digits."""
        if self.dps is not None:
            return self.dps
        return 24 + int(16 * log10(self.n_points))


_NONDIM = {
    "deflection": lambda v, p, q: 100.0 * p.EI * v / (q * p.L ** 4),
    "slope": lambda v, p, q: v,
    "slope_wl": lambda v, p, q: v * p.L,
    "bending_moment": lambda v, p, q: v / (q * p.L ** 2),
    "curvature": lambda v, p, q: v * p.L,
    "triple_derivative": lambda v, p, q: v * p.L ** 2,
    "double_moment": lambda v, p, q: v / (q * p.L ** 3),
    "triple_moment": lambda v, p, q: v / (q * p.L ** 4),
    "frequency": lambda v, p, q: v * p.L ** 2 * sqrt(p.m / p.EI),
    "buckling_load": lambda v, p, q: v * p.L ** 2 / p.EI,
}

QUANTITIES = tuple(_NONDIM)


def nondimensionalize(quantity, raw, props, q=DEFAULT_Q):
    """Scale a raw value; q = 0 falls back to a unit load so zero fields stay zero."""
    q = q or 1.0
    try:
        fn = _NONDIM[quantity]
    except KeyError:
        raise ValueError(f"unknown quantity {quantity!r}") from None
    return fn(raw, props, q)

"""Domain types, the peak-Gausson profile and the conserved functionals."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PhysParams",
    "Grid",
    "WaveField",
    "Verdict",
    "Sector",
    "StabilityVerdict",
    "gausson_profile",
    "gausson",
    "charge",
    "energy",
    "wtilde_components",
    "wtilde_inner",
    "wtilde_norm",
    "orbital_distance",
    "gausson_mass",
]


@dataclass(frozen=True)
class PhysParams:
    """Frequency ``omega`` and delta coupling ``gamma`` of one model instance.

    ``gamma > 0`` is an attractive interaction, ``gamma < 0`` repulsive;
    ``gamma = 0`` is the pure Gaussian reference case.
    """

    omega: float = -1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and math.isfinite(self.gamma)):
            raise ValueError(f"omega and gamma must be finite, got {self.omega}, {self.gamma}")


@dataclass(frozen=True)
class Grid:
    """Symmetric uniform mesh on [-L, L] with a node exactly at x = 0."""

    half_width: float = 12.0
    n_points: int = 2401
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.n_points < 3:
            raise ValueError("n_points must be at least 3")
        if self.n_points % 2 == 0:
            raise ValueError("n_points must be odd")
        n2 = (self.n_points - 1) // 2
        # integer-based construction keeps the mesh exactly symmetric
        x = self.spacing * np.arange(-n2, n2 + 1, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def center(self) -> int:
        return (self.n_points - 1) // 2

    @classmethod
    def from_spacing(cls, half_width: float, h: float) -> "Grid":
        n2 = int(round(half_width / h))
        return cls(half_width=n2 * h, n_points=2 * n2 + 1)

    def weights(self) -> np.ndarray:
        """Quadrature weights: all h.

        Fields vanish at the Dirichlet nodes +-(L + h) just outside the mesh,
        so this is the trapezoid rule on [-L - h, L + h]. It is also the
        inner product in which the discretized operators are symmetric, which
        makes the Crank-Nicolson flow conserve the charge exactly.
        """
        return np.full(self.n_points, self.spacing)


@dataclass(frozen=True)
class WaveField:
    """Complex samples of a function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} values, got shape {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def l2_norm(self) -> float:
        return math.sqrt(float(np.sum(self.grid.weights() * np.abs(self.values) ** 2)))

    def __mul__(self, c) -> "WaveField":
        return WaveField(self.grid, self.values * c)

    __rmul__ = __mul__

    def __add__(self, other: "WaveField") -> "WaveField":
        _check_same_grid(self, other)
        return WaveField(self.grid, self.values + other.values)

    def __sub__(self, other: "WaveField") -> "WaveField":
        _check_same_grid(self, other)
        return WaveField(self.grid, self.values - other.values)


class Verdict(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    INCONCLUSIVE = "Inconclusive"


class Sector(str, enum.Enum):
    FULL = "Full"
    RADIAL = "Radial"


@dataclass(frozen=True)
class StabilityVerdict:
    neg_count_L1: int
    neg_count_L2: int
    p_index: int
    verdict: Verdict
    sector: Sector

    @staticmethod
    def decide(n: int, p: int) -> Verdict:
        """Grillakis-Shatah-Strauss rule comparing n(L1) with p."""
        if n == p:
            return Verdict.STABLE
        if (n - p) % 2 == 1:
            return Verdict.UNSTABLE
        return Verdict.INCONCLUSIVE


def _check_same_grid(u: WaveField, v: WaveField) -> None:
    if u.grid != v.grid:
        raise ValueError("wave fields live on different grids")


def gausson_profile(x, omega: float, gamma: float):
    """exp((omega+1)/2) * exp(-(|x| + gamma/2)^2 / 2), pointwise."""
    x = np.asarray(x, dtype=float)
    return math.exp(0.5 * (omega + 1.0)) * np.exp(-0.5 * (np.abs(x) + 0.5 * gamma) ** 2)


def gausson(params: PhysParams, grid: Grid) -> WaveField:
    return WaveField(grid, gausson_profile(grid.nodes, params.omega, params.gamma))


def charge(u: WaveField) -> float:
    """Q(u) = 1/2 int |u|^2 with trapezoid weights."""
    return 0.5 * float(np.sum(u.grid.weights() * np.abs(u.values) ** 2))


def _xlogx(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = s[pos] * np.log(s[pos])
    return out


def energy(u: WaveField, gamma: float) -> float:
    """E(u) = 1/2 |u'|^2 - 1/2 int |u|^2 log|u|^2 - gamma/2 |u(0)|^2.

    The gradient uses forward differences over the N-1 cells; the
    logarithmic term uses nodal trapezoid weights with 0 log 0 = 0.
    """
    h = u.grid.spacing
    du = np.diff(u.values)
    kinetic = 0.5 * float(np.sum(np.abs(du) ** 2)) / h
    dens = np.abs(u.values) ** 2
    potential = -0.5 * float(np.sum(u.grid.weights() * _xlogx(dens)))
    point = -0.5 * gamma * float(dens[u.grid.center])
    return kinetic + potential + point


def wtilde_components(u: WaveField) -> tuple[float, float, float]:
    """(|u'|^2, |u|^2, |x u|^2) as used by the weighted norm."""
    h = u.grid.spacing
    w = u.grid.weights()
    dens = np.abs(u.values) ** 2
    grad = float(np.sum(np.abs(np.diff(u.values)) ** 2)) / h
    return grad, float(np.sum(w * dens)), float(np.sum(w * u.x**2 * dens))


def wtilde_inner(u: WaveField, v: WaveField) -> complex:
    """Complex inner product <u, v> inducing :func:`wtilde_norm` (linear in u)."""
    _check_same_grid(u, v)
    h = u.grid.spacing
    w = u.grid.weights()
    grad = np.sum(np.diff(u.values) * np.conj(np.diff(v.values))) / h
    mass = np.sum(w * (1.0 + u.x**2) * u.values * np.conj(v.values))
    return complex(grad + mass)


def wtilde_norm(u: WaveField) -> float:
    """Squared weighted norm |u'|^2 + |u|^2 + |x u|^2 (quadratic in u)."""
    return float(sum(wtilde_components(u)))


def orbital_distance(u: WaveField, phi: WaveField) -> float:
    """min over theta of the weighted-norm distance between u and e^{i theta} phi.

    The minimizing phase is arg <u, phi>; the distance is evaluated directly
    at that phase rather than through the expanded quadratic form, which
    would lose half the significant digits to cancellation.
    """
    _check_same_grid(u, phi)
    ip = wtilde_inner(u, phi)
    rot = ip / abs(ip) if ip != 0 else 1.0
    return math.sqrt(wtilde_norm(u - phi * rot))


def optimal_phase(u: WaveField, phi: WaveField) -> float:
    return float(np.angle(wtilde_inner(u, phi)))


def gausson_mass(params: PhysParams) -> float:
    """|phi|_2^2 = e^{omega+1} sqrt(pi) erfc(gamma/2)."""
    return math.exp(params.omega + 1.0) * math.sqrt(math.pi) * math.erfc(0.5 * params.gamma)

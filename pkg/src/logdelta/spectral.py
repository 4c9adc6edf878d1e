"""Discretized Schrodinger operators with a delta interaction at x = 0.

Operators are real symmetric tridiagonal matrices on the nodes of a
:class:`~logdelta.core.Grid`. The delta is lumped onto the center node as
``-gamma/h`` and the interval is truncated with homogeneous Dirichlet
conditions just outside +-L. Eigenvalues come from Sturm-sequence
bisection, eigenvectors from inverse iteration.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _tridiag
from .core import (
    Grid,
    PhysParams,
    Sector,
    StabilityVerdict,
    WaveField,
    gausson_mass,
    gausson_profile,
)

__all__ = [
    "OperatorKind",
    "Parity",
    "TridiagOperator",
    "SpectralResult",
    "BranchTrace",
    "DiscretizationError",
    "assemble_h_delta",
    "assemble_l",
    "neg_count_sturm",
    "neg_count_transverse",
    "eigenvalues_bisection",
    "eigenvector_inverse_iteration",
    "sector_restrict",
    "spectrum",
    "gamma_sweep",
    "stability_index",
    "count_sign_changes",
]


class OperatorKind(str, enum.Enum):
    H_DELTA = "HDelta"
    L1 = "L1"
    L2 = "L2"
    EVEN_SECTOR = "EvenSector"
    ODD_SECTOR = "OddSector"


class Parity(str, enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


class DiscretizationError(RuntimeError):
    """A numerical result contradicts a property the continuum operator has."""


@dataclass(frozen=True)
class TridiagOperator:
    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid
    kind: OperatorKind
    gamma: float
    which: int | None = None

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float)
        e = np.ascontiguousarray(self.offdiag, dtype=float)
        if e.shape != (d.shape[0] - 1,):
            raise ValueError("offdiag must have length len(diag) - 1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("operator entries must be finite")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return _tridiag.matvec(self.diag, self.offdiag, np.ascontiguousarray(v))

    def apply(self, u: WaveField) -> WaveField:
        if u.grid != self.grid or self.size != u.grid.n_points:
            raise ValueError("operator and field do not share a full-line grid")
        return WaveField(u.grid, self.matvec(u.values))

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.size)
        r[:-1] += np.abs(self.offdiag)
        r[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    @classmethod
    def from_arrays(cls, diag, offdiag) -> "TridiagOperator":
        """Bare matrix with a placeholder grid, for tests and small problems."""
        n = len(diag)
        n_pts = n if n % 2 else n + 1
        return cls(diag, offdiag, Grid(1.0, max(n_pts, 3)), OperatorKind.H_DELTA, 0.0)


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: list[WaveField] | None
    neg_count: int
    which: OperatorKind


@dataclass(frozen=True)
class BranchTrace:
    gammas: np.ndarray
    second_eigenvalue: np.ndarray
    neg_count: np.ndarray
    slope_at_zero: float


def _potential(grid: Grid, gamma: float, which: int) -> np.ndarray:
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    shift = 3.0 if which == 1 else 1.0
    return (np.abs(grid.nodes) + 0.5 * gamma) ** 2 - shift


def assemble_h_delta(grid: Grid, gamma: float) -> TridiagOperator:
    """-d^2/dx^2 with the jump condition f'(0+) - f'(0-) = -gamma f(0)."""
    h = grid.spacing
    diag = np.full(grid.n_points, 2.0 / h**2)
    diag[grid.center] -= gamma / h
    off = np.full(grid.n_points - 1, -1.0 / h**2)
    return TridiagOperator(diag, off, grid, OperatorKind.H_DELTA, float(gamma))


def assemble_l(grid: Grid, gamma: float, which: int) -> TridiagOperator:
    """Linearized operator L1 (which=1) or L2 (which=2) around the Gausson."""
    base = assemble_h_delta(grid, gamma)
    kind = OperatorKind.L1 if which == 1 else OperatorKind.L2
    return TridiagOperator(
        base.diag + _potential(grid, gamma, which),
        base.offdiag,
        grid,
        kind,
        float(gamma),
        which,
    )


def sector_restrict(grid: Grid, gamma: float, which: int, parity: Parity | str) -> TridiagOperator:
    """Restriction of L1 or L2 to even or odd functions, on the nodes x >= 0.

    The odd sector drops the center node (u(0) = 0), so the delta term
    disappears. The even sector folds the ghost value u(-h) = u(h) into
    the center row and is symmetrized by the similarity diag(1/sqrt 2, 1, ...),
    which turns the -2/h^2 coupling into -sqrt(2)/h^2 on both sides.
    """
    parity = Parity(parity)
    full = assemble_l(grid, gamma, which)
    c = grid.center
    h = grid.spacing
    if parity is Parity.ODD:
        return TridiagOperator(
            full.diag[c + 1:], full.offdiag[c + 1:], grid, OperatorKind.ODD_SECTOR, float(gamma), which
        )
    off = full.offdiag[c:].copy()
    off[0] = -math.sqrt(2.0) / h**2
    return TridiagOperator(
        full.diag[c:], off, grid, OperatorKind.EVEN_SECTOR, float(gamma), which
    )


def neg_count_sturm(op: TridiagOperator, shift: float = 0.0) -> int:
    """Number of eigenvalues strictly below ``shift`` (LDL^T inertia)."""
    return int(_tridiag.sturm_count(op.diag, op.offdiag, float(shift)))


def neg_count_transverse(op: TridiagOperator, direction: np.ndarray) -> int:
    """Negative eigenvalues of ``op`` restricted to the complement of ``direction``.

    Uses the Haynsworth inertia formula for the constraint <v, direction> = 0:
    n(op on direction^perp) = n(op) - [<op^{-1} d, d> < 0]. This is the
    count that stays meaningful when ``direction`` approximates a kernel
    vector, whose discrete eigenvalue sits at 0 up to discretization error.
    """
    d = np.ascontiguousarray(np.real(direction), dtype=float)
    if d.shape != (op.size,):
        raise ValueError("direction must match the operator size")
    n = neg_count_sturm(op, 0.0)
    x, ok = _tridiag.thomas(op.offdiag, op.diag, op.offdiag, d)
    if not ok or not np.all(np.isfinite(x)):
        raise DiscretizationError("operator is singular; transverse count undefined")
    return n - (1 if float(x @ d) < 0.0 else 0)


def eigenvalues_bisection(op: TridiagOperator, k: int, tol: float = 1e-10) -> np.ndarray:
    """The ``k`` smallest eigenvalues, each bracketed to width ``tol``."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > op.size:
        raise ValueError(f"k={k} exceeds the matrix size {op.size}")
    d, e = op.diag, op.offdiag
    emax = float(np.max(np.abs(e))) if e.size else 0.0
    lo = float(np.min(d)) - 2.0 * emax
    hi = float(np.max(d)) + 2.0 * emax
    pad = 1e-8 * max(1.0, hi - lo)
    lo, hi = lo - pad, hi + pad
    # bisection cannot resolve below the floating-point spacing of the bracket
    tol = max(tol, 4.0 * np.spacing(max(abs(lo), abs(hi))))
    return _tridiag.bisect_eigenvalues(d, e, k, lo, hi, tol)


def _to_full_line(op: TridiagOperator, v: np.ndarray) -> np.ndarray:
    """Unfold a sector eigenvector to the full mesh."""
    c = op.grid.center
    n = op.grid.n_points
    out = np.zeros(n)
    if op.kind is OperatorKind.EVEN_SECTOR:
        w = v.copy()
        w[0] *= math.sqrt(2.0)
        out[c:] = w
        out[:c] = w[:0:-1]
    elif op.kind is OperatorKind.ODD_SECTOR:
        out[c + 1:] = v
        out[:c] = -v[::-1]
    else:
        out[:] = v
    return out


def eigenvector_inverse_iteration(
    op: TridiagOperator, lam: float, maxiter: int = 50, tol: float = 1e-8
) -> WaveField:
    """Eigenvector for the eigenvalue near ``lam`` by shifted inverse iteration.

    The result lives on the full mesh (sector vectors are unfolded by
    parity), has unit discrete L2 norm, and its largest-magnitude entry is
    positive. Raises ``RuntimeError`` if the residual does not reach ``tol``
    within ``maxiter`` iterations, which points at a cluster or a wrong shift.
    """
    d = op.diag
    e = op.offdiag
    n = op.size
    # nudge off the eigenvalue so the shifted matrix stays nonsingular
    scale = max(1.0, float(np.max(np.abs(d))))
    sigma = lam + 64.0 * np.finfo(float).eps * scale
    shifted = d - sigma
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    resid = math.inf
    for _ in range(maxiter):
        w, _ = _tridiag.thomas(e, shifted, e, v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            break
        v = w / nw
        tv = _tridiag.matvec(d, e, v)
        rq = float(v @ tv)
        # for a unit Euclidean v this equals the residual in the discrete L2 norm
        resid = float(np.linalg.norm(tv - rq * v))
        if resid <= tol:
            break
    else:
        raise RuntimeError(
            f"inverse iteration did not converge near {lam} (residual {resid:.3e}); "
            "eigenvalue cluster or shift too far from an eigenvalue"
        )
    if not np.isfinite(resid):
        raise RuntimeError(f"inverse iteration broke down near {lam}")
    # the target must be simple; a cluster is reported, not deflated
    win = max(10.0 * tol, 1e-10 * scale)
    if _tridiag.sturm_count(d, e, rq + win) - _tridiag.sturm_count(d, e, rq - win) > 1:
        raise RuntimeError(f"eigenvalue cluster near {rq}; inverse iteration needs a simple eigenvalue")
    full = _to_full_line(op, v)
    full /= math.sqrt(float(np.sum(op.grid.weights() * full**2)))
    if full[np.argmax(np.abs(full))] < 0:
        full = -full
    return WaveField(op.grid, full)


def spectrum(op: TridiagOperator, k: int, vectors: bool = False) -> SpectralResult:
    lams = eigenvalues_bisection(op, k)
    vecs = [eigenvector_inverse_iteration(op, lam) for lam in lams] if vectors else None
    return SpectralResult(lams, vecs, neg_count_sturm(op, 0.0), op.kind)


def count_sign_changes(values, rel_floor: float = 1e-8) -> int:
    """Sign changes of a real sequence, ignoring entries below rel_floor * max."""
    v = np.real(np.asarray(values))
    big = v[np.abs(v) > rel_floor * np.max(np.abs(v))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LOGDELTA_THREADS", "1")))
    except ValueError:
        return 1


def gamma_sweep(
    gamma_min: float, gamma_max: float, steps: int, which: int, grid: Grid
) -> BranchTrace:
    """Trace the second-smallest eigenvalue of L_which across gamma.

    The slope at gamma = 0 is a central difference over the two sweep
    nodes neighbouring 0 (skipping 0 itself when it is a node).
    """
    if steps < 3:
        raise ValueError("steps must be at least 3")
    gammas = np.linspace(gamma_min, gamma_max, steps)

    def point(g):
        op = assemble_l(grid, float(g), which)
        return eigenvalues_bisection(op, 2)[1], neg_count_sturm(op, 0.0)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(point, gammas))
    second = np.array([r[0] for r in results])
    counts = np.array([r[1] for r in results], dtype=int)
    slope = _slope_at_zero(gammas, second)
    return BranchTrace(gammas, second, counts, slope)


def _slope_at_zero(gammas: np.ndarray, values: np.ndarray) -> float:
    tol = 1e-12 * max(1.0, float(np.max(np.abs(gammas))))
    left = np.nonzero(gammas < -tol)[0]
    right = np.nonzero(gammas > tol)[0]
    if left.size == 0 or right.size == 0:
        return math.nan
    i, j = left[-1], right[0]
    return float((values[j] - values[i]) / (gammas[j] - gammas[i]))


def stability_index(
    params: PhysParams, grid: Grid, sector: Sector | str = Sector.FULL
) -> StabilityVerdict:
    """Grillakis-Shatah-Strauss verdict for the standing wave of ``params``.

    p is 1 because d/domega |phi|^2 = |phi|^2 > 0 for every (omega, gamma).
    """
    sector = Sector(sector)
    gamma = params.gamma
    if gamma == 0:
        raise ValueError("the stability index is defined for gamma != 0")
    if sector is Sector.FULL:
        l1 = assemble_l(grid, gamma, 1)
    else:
        l1 = sector_restrict(grid, gamma, 1, Parity.EVEN)
    n1 = neg_count_sturm(l1, 0.0)
    # the Gausson spans ker L2; its discrete eigenvalue is 0 only up to O(h^2)
    phi = gausson_profile(grid.nodes, params.omega, gamma)
    n2 = neg_count_transverse(assemble_l(grid, gamma, 2), phi)
    if n2 != 0:
        raise DiscretizationError(f"n(L2) = {n2} at gamma = {gamma}; expected 0")
    p = 1 if gausson_mass(params) > 0 else 0
    return StabilityVerdict(n1, n2, p, StabilityVerdict.decide(n1, p), sector)

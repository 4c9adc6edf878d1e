"""Kummer, Gamma and parabolic cylinder functions, and a matching-condition
eigenvalue oracle for the harmonic oscillators with a delta interaction.

On x > 0 the decaying solution of

    -f'' + (x + gamma/2)^2 f = E f

is f(x) = U(a, sqrt(2) (x + gamma/2)) with a = -E/2. Even eigenfunctions
must satisfy the jump condition 2 f'(0+) = -gamma f(0); odd ones vanish
at the origin. Roots of these conditions in the eigenvalue are computed
here independently of any matrix discretization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MatchingProblem",
    "hyp1f1",
    "gamma_fn",
    "rgamma",
    "parabolic_u",
    "parabolic_u_prime",
    "matching_residual",
    "semianalytic_eigs",
    "merged_eigs",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class MatchingProblem:
    which: int
    gamma: float
    parity: str = "Even"

    def __post_init__(self):
        if self.which not in (1, 2):
            raise ValueError("which must be 1 or 2")
        p = str(getattr(self.parity, "value", self.parity)).capitalize()
        if p not in ("Even", "Odd"):
            raise ValueError(f"parity must be Even or Odd, got {self.parity!r}")
        object.__setattr__(self, "parity", p)

    def a_of(self, lam: float) -> float:
        return -(lam + (3.0 if self.which == 1 else 1.0)) / 2.0

    @property
    def z0(self) -> float:
        return self.gamma / math.sqrt(2.0)


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def hyp1f1(a: float, b: float, z: float, maxterms: int = 500) -> float:
    """Kummer's confluent hypergeometric function 1F1(a; b; z) by its series.

    Negative arguments go through Kummer's transformation
    1F1(a; b; z) = e^z 1F1(b - a; b; -z), which avoids the cancellation of
    an alternating series.
    """
    if _is_nonpositive_int(b):
        raise ValueError(f"1F1 undefined for b = {b}")
    if abs(z) > 60:
        raise ValueError("series evaluation is limited to |z| <= 60")
    if z < 0 and not _is_nonpositive_int(a):
        return math.exp(z) * _kummer_series(b - a, b, -z, maxterms)
    return _kummer_series(a, b, z, maxterms)


def _kummer_series(a: float, b: float, z: float, maxterms: int) -> float:
    term = 1.0
    total = 1.0
    for k in range(maxterms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        if term == 0.0:
            return total
        # once the ratio of successive terms is below 1/2 the tail is
        # bounded by twice the last term
        ratio = abs((a + k + 1) * z / ((b + k + 1) * (k + 2)))
        if ratio < 0.5 and abs(term) <= 1e-16 * abs(total):
            return total
    raise ArithmeticError(f"1F1({a}; {b}; {z}) did not converge in {maxterms} terms")


def gamma_fn(x: float) -> float:
    """Gamma function (Lanczos, g=7, with reflection for x < 1/2)."""
    if _is_nonpositive_int(x):
        raise ValueError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpositive_int(x):
        return 0.0
    return 1.0 / gamma_fn(x)


def _prefactors(a: float) -> tuple[float, float]:
    # cos(xi pi) Gamma(1/2 - xi) and sin(xi pi) Gamma(1 - xi); where a Gamma
    # factor has a pole the trigonometric factor vanishes and the product
    # is pi / Gamma(1/2 + xi), resp. pi / Gamma(xi), by reflection
    xi = 0.5 * a + 0.25
    c1 = math.pi * rgamma(0.5 + xi)
    c2 = math.pi * rgamma(xi)
    return c1, c2


def parabolic_u(a: float, z: float) -> float:
    """Parabolic cylinder function U(a, z), the solution of
    g'' = (z^2/4 + a) g that decays as z -> +infinity.

    Built from the even and odd Kummer solutions

        y1 = exp(-z^2/4) 1F1(a/2 + 1/4; 1/2; z^2/2)
        y2 = z exp(-z^2/4) 1F1(a/2 + 3/4; 3/2; z^2/2)

    as U = [cos(xi pi) Gamma(1/2 - xi) y1 - sqrt 2 sin(xi pi) Gamma(1 - xi) y2]
    / (2^xi sqrt pi) with xi = a/2 + 1/4.
    """
    if abs(z) > 8:
        raise ValueError("parabolic_u is evaluated by series only for |z| <= 8")
    xi = 0.5 * a + 0.25
    c1, c2 = _prefactors(a)
    w = 0.5 * z * z
    g = math.exp(-0.25 * z * z)
    y1 = g * hyp1f1(xi, 0.5, w) if c1 != 0.0 else 0.0
    y2 = z * g * hyp1f1(xi + 0.5, 1.5, w) if c2 != 0.0 else 0.0
    return (c1 * y1 - math.sqrt(2.0) * c2 * y2) / (2.0**xi * math.sqrt(math.pi))


def parabolic_u_prime(a: float, z: float) -> float:
    """dU/dz from term-wise differentiation of the Kummer representation."""
    if abs(z) > 8:
        raise ValueError("parabolic_u_prime is evaluated by series only for |z| <= 8")
    xi = 0.5 * a + 0.25
    c1, c2 = _prefactors(a)
    w = 0.5 * z * z
    g = math.exp(-0.25 * z * z)
    # d/dz 1F1(p; q; z^2/2) = z (p/q) 1F1(p+1; q+1; z^2/2)
    dy1 = 0.0
    if c1 != 0.0:
        dy1 = g * (-0.5 * z * hyp1f1(xi, 0.5, w) + z * (xi / 0.5) * hyp1f1(xi + 1.0, 1.5, w))
    dy2 = 0.0
    if c2 != 0.0:
        p = xi + 0.5
        dy2 = g * (
            (1.0 - 0.5 * z * z) * hyp1f1(p, 1.5, w)
            + z * z * (p / 1.5) * hyp1f1(p + 1.0, 2.5, w)
        )
    return (c1 * dy1 - math.sqrt(2.0) * c2 * dy2) / (2.0**xi * math.sqrt(math.pi))


def matching_residual(lam: float, prob: MatchingProblem) -> float:
    """Zero exactly when ``lam`` is an eigenvalue in the problem's parity sector."""
    a = prob.a_of(lam)
    z0 = prob.z0
    if prob.parity == "Odd":
        return parabolic_u(a, z0)
    return 2.0 * math.sqrt(2.0) * parabolic_u_prime(a, z0) + prob.gamma * parabolic_u(a, z0)


def _bisect(f, lo: float, hi: float, flo: float, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def semianalytic_eigs(
    prob: MatchingProblem,
    k: int,
    search_max: float = 40.0,
    step: float = 0.05,
    tol: float = 1e-10,
) -> np.ndarray:
    """The ``k`` smallest roots of :func:`matching_residual` below ``search_max``.

    Scans upward from the bottom of the potential (-3 for L1, -1 for L2)
    in steps of ``step`` for sign changes and bisects each bracket.
    """
    if k < 1:
        raise ValueError("k must be positive")

    def f(lam):
        return matching_residual(lam, prob)

    # every eigenvalue of -d^2 + V - shift - gamma*delta exceeds min V - shift - gamma^2/4
    lam = (-3.0 if prob.which == 1 else -1.0) - 0.25 * max(prob.gamma, 0.0) ** 2 - step
    roots: list[float] = []
    flo = f(lam)
    while len(roots) < k and lam < search_max:
        nxt = min(lam + step, search_max)
        fn = f(nxt)
        if fn == 0.0:
            roots.append(nxt)
            nxt += 1e-3 * step
            fn = f(nxt)
        elif (fn < 0) != (flo < 0):
            roots.append(_bisect(f, lam, nxt, flo, tol))
        lam, flo = nxt, fn
    if len(roots) < k:
        raise ValueError(
            f"found {len(roots)} of {k} requested roots below search_max={search_max}"
        )
    return np.array(roots[:k])


def merged_eigs(which: int, gamma: float, k: int, search_max: float = 40.0) -> np.ndarray:
    """Lowest ``k`` eigenvalues on the full line: both parity sectors merged."""
    even = semianalytic_eigs(MatchingProblem(which, gamma, "Even"), k, search_max)
    odd = semianalytic_eigs(MatchingProblem(which, gamma, "Odd"), k, search_max)
    return np.sort(np.concatenate([even, odd]))[:k]

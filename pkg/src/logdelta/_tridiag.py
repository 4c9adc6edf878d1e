"""Compiled kernels for symmetric tridiagonal matrices.

All routines take the main diagonal ``d`` (length n) and the single
off-diagonal ``e`` (length n-1) of a symmetric matrix.
"""

import numpy as np
from numba import njit

# Pivot floor used when an LDL^T pivot is exactly zero.
_TINY = 1e-300


@njit(cache=True, nogil=True)
def sturm_count(d, e, shift):
    """Number of eigenvalues of T strictly below ``shift``.

    Counts negative pivots of the LDL^T factorization of ``T - shift*I``
    (Sylvester's law of inertia). A vanishing pivot is replaced by a tiny
    positive number scaled to the matrix norm, which amounts to moving the
    shift infinitesimally down, so an eigenvalue equal to the shift is not
    counted.
    """
    n = d.shape[0]
    scale = 0.0
    for i in range(n):
        a = abs(d[i])
        if i > 0:
            a += abs(e[i - 1])
        if i < n - 1:
            a += abs(e[i])
        if a > scale:
            scale = a
    tiny = _TINY * max(scale, 1.0)
    count = 0
    q = d[0] - shift
    if q == 0.0:
        q = tiny
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = (d[i] - shift) - e[i - 1] * e[i - 1] / q
        if q == 0.0:
            q = tiny
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def sturm_counts(d, e, shifts):
    out = np.empty(shifts.shape[0], dtype=np.int64)
    for j in range(shifts.shape[0]):
        out[j] = sturm_count(d, e, shifts[j])
    return out


@njit(cache=True, nogil=True)
def bisect_eigenvalues(d, e, k, lo, hi, tol):
    """The ``k`` smallest eigenvalues by bisection on the Sturm count."""
    out = np.empty(k)
    for j in range(k):
        a = lo
        b = hi
        # lower bracket can reuse the previous eigenvalue
        if j > 0 and out[j - 1] > a:
            a = out[j - 1] - tol
        while b - a > tol:
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if sturm_count(d, e, mid) > j:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
    return out


@njit(cache=True, nogil=True)
def thomas(lower, diag, upper, rhs):
    """Solve a (possibly complex) tridiagonal system with the Thomas algorithm.

    ``lower[i]`` multiplies x[i] in row i+1 and ``upper[i]`` multiplies
    x[i+1] in row i; both have length n-1. Returns the solution and a
    flag that is False when a pivot vanished.
    """
    n = diag.shape[0]
    c = np.empty(n, dtype=diag.dtype)
    x = np.empty(n, dtype=rhs.dtype)
    ok = True
    p = diag[0]
    if p == 0:
        ok = False
        p = _TINY
    c[0] = upper[0] / p if n > 1 else 0.0
    x[0] = rhs[0] / p
    for i in range(1, n):
        p = diag[i] - lower[i - 1] * c[i - 1]
        if p == 0:
            ok = False
            p = _TINY
        if i < n - 1:
            c[i] = upper[i] / p
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / p
    for i in range(n - 2, -1, -1):
        x[i] = x[i] - c[i] * x[i + 1]
    return x, ok


@njit(cache=True, nogil=True)
def twisted_solve(off, diag, rhs):
    """Solve a symmetric tridiagonal system by eliminating from both ends
    towards the middle row.

    The two sweeps perform mirror-image operations, so a mirror-symmetric
    matrix with even (odd) right-hand side yields an exactly even (odd)
    solution in floating point.
    """
    n = diag.shape[0]
    k = (n - 1) // 2
    ct = np.empty(n, dtype=diag.dtype)
    mb = np.empty(n, dtype=diag.dtype)
    x = np.empty(n, dtype=rhs.dtype)
    ok = True
    # top sweep over rows 0..k-1
    for i in range(k):
        p = diag[i]
        r = rhs[i]
        if i > 0:
            p = p - off[i - 1] * ct[i - 1]
            r = r - off[i - 1] * x[i - 1]
        if p == 0:
            ok = False
            p = _TINY
        ct[i] = off[i] / p
        x[i] = r / p
    # bottom sweep over rows n-1..k+1
    for i in range(n - 1, k, -1):
        q = diag[i]
        r = rhs[i]
        if i < n - 1:
            q = q - off[i] * mb[i + 1]
            r = r - off[i] * x[i + 1]
        if q == 0:
            ok = False
            q = _TINY
        mb[i] = off[i - 1] / q
        x[i] = r / q
    p = diag[k]
    r = rhs[k]
    if k > 0 and k < n - 1:
        p = p - (off[k - 1] * ct[k - 1] + off[k] * mb[k + 1])
        r = r - (off[k - 1] * x[k - 1] + off[k] * x[k + 1])
    elif k > 0:
        p = p - off[k - 1] * ct[k - 1]
        r = r - off[k - 1] * x[k - 1]
    elif k < n - 1:
        p = p - off[k] * mb[k + 1]
        r = r - off[k] * x[k + 1]
    if p == 0:
        ok = False
        p = _TINY
    x[k] = r / p
    for i in range(k - 1, -1, -1):
        x[i] = x[i] - ct[i] * x[i + 1]
    for i in range(k + 1, n):
        x[i] = x[i] - mb[i] * x[i - 1]
    return x, ok


@njit(cache=True, nogil=True)
def matvec(d, e, v):
    n = d.shape[0]
    out = np.empty(n, dtype=v.dtype)
    if n == 1:
        out[0] = d[0] * v[0]
        return out
    out[0] = d[0] * v[0] + e[0] * v[1]
    for i in range(1, n - 1):
        # grouped so that mirrored rows round identically
        out[i] = d[i] * v[i] + (e[i - 1] * v[i - 1] + e[i] * v[i + 1])
    out[n - 1] = d[n - 1] * v[n - 1] + e[n - 2] * v[n - 2]
    return out


@njit(cache=True, nogil=True)
def cayley_steps(d, e, u, dt, nsteps):
    """Apply ``nsteps`` Crank-Nicolson steps of i u_t = T u."""
    n = d.shape[0]
    half = 0.5j * dt
    a_diag = np.empty(n, dtype=np.complex128)
    off = np.empty(n - 1, dtype=np.complex128)
    for i in range(n):
        a_diag[i] = 1.0 + half * d[i]
    for i in range(n - 1):
        off[i] = half * e[i]
    ok = True
    for _ in range(nsteps):
        rhs = u - half * matvec(d, e, u)
        u, good = twisted_solve(off, a_diag, rhs)
        ok = ok and good
    return u, ok


@njit(cache=True, nogil=True)
def strang_steps(d, e, u, dt, clamp, nsteps):
    """Nonlinear half phase, Crank-Nicolson step, nonlinear half phase."""
    n = d.shape[0]
    half = 0.5j * dt
    a_diag = np.empty(n, dtype=np.complex128)
    off = np.empty(n - 1, dtype=np.complex128)
    for i in range(n):
        a_diag[i] = 1.0 + half * d[i]
    for i in range(n - 1):
        off[i] = half * e[i]
    ok = True
    for _ in range(nsteps):
        _log_phase(u, 0.5 * dt, clamp)
        rhs = u - half * matvec(d, e, u)
        u, good = twisted_solve(off, a_diag, rhs)
        ok = ok and good
        _log_phase(u, 0.5 * dt, clamp)
    return u, ok


@njit(cache=True, nogil=True)
def _log_phase(u, tau, clamp):
    for i in range(u.shape[0]):
        s = u[i].real * u[i].real + u[i].imag * u[i].imag
        if s > 0.0:
            f = np.log(s)
            if f > clamp:
                f = clamp
            elif f < -clamp:
                f = -clamp
        else:
            f = -clamp
        u[i] = u[i] * np.exp(1j * tau * f)

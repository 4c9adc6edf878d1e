"""
Checking the linear flow against free-propagator references
===========================================================

The Crank-Nicolson solver for i u_t = H u is compared with propagators
assembled from the free Schrodinger group alone. For gamma > 0 the bound
state e^{-gamma|x|/2} rotates in phase and the rest is mapped to a free odd
flow by d/dx + gamma/2. For gamma < 0 the kernel is the free one minus a
reflected, exponentially smeared copy.
"""

import numpy as np

from logdelta import Grid, WaveField, assemble_h_delta
from logdelta import _tridiag
from logdelta.evolution import free_propagator_ref, repulsive_propagator_ref

grid = Grid(24.0, 4801)
x = grid.nodes
t = 1.0


def crank_nicolson(u, gamma, dt=1e-3):
    op = assemble_h_delta(grid, gamma)
    v, _ = _tridiag.cayley_steps(op.diag, op.offdiag, u.values.copy(), dt, int(round(t / dt)))
    return WaveField(grid, v)


u = WaveField(grid, np.exp(-(x - 1.0) ** 2))
diff = (crank_nicolson(u, 1.0) - free_propagator_ref(u, t, 1.0)).l2_norm()
print(f"attractive, gamma=1: L2 difference {diff:.2e}")

u = WaveField(grid, np.exp(-(x + 2.0) ** 2 + 1j * x))
diff = (crank_nicolson(u, -1.0) - repulsive_propagator_ref(u, t, -1.0)).l2_norm()
print(f"repulsive, gamma=-1: L2 difference {diff:.2e}")

"""
An eigenvalue oracle from parabolic cylinder functions
======================================================

On each half-line the eigenfunctions are U(a, sqrt(2)(x + gamma/2)).
Imposing the jump condition (even states) or a node (odd states) at the
origin gives scalar equations in the eigenvalue whose roots do not depend
on any mesh. They serve as a reference for the matrix spectra.
"""

import numpy as np

from logdelta import Grid, assemble_l, eigenvalues_bisection, merged_eigs
from logdelta.specfun import MatchingProblem, matching_residual

###############################################################################
# The Gausson eigenvalue -2 is an exact root for every coupling.

for gamma in (-2.0, 0.0, 2.0):
    print(f"gamma={gamma:+g}: residual at -2 = {matching_residual(-2.0, MatchingProblem(1, gamma)):.1e}")

###############################################################################
# Mesh convergence
# ----------------
# The lumped delta is first-order consistent at the center node, but the
# eigenvalues still converge at second order in h.

for gamma in (-1.0, 1.0):
    ref = merged_eigs(1, gamma, 3)
    print(f"gamma={gamma:+g}: oracle {np.array2string(ref, precision=8)}")
    for h in (0.04, 0.02, 0.01, 0.005):
        lam = eigenvalues_bisection(assemble_l(Grid.from_spacing(12.0, h), gamma, 1), 3)
        print(f"    h={h:<6g} max error {np.max(np.abs(lam - ref)):.2e}")

"""
The second eigenvalue as a function of the coupling
===================================================

At gamma = 0 the operator L1 has the kernel spanned by the derivative of
the Gaussian. Switching on the delta pushes this eigenvalue up for gamma > 0
and down for gamma < 0, with slope 2/sqrt(pi) at the origin.
"""

import math
import os

from logdelta import Grid, gamma_sweep
from logdelta.svg import emit_svg

out = os.environ.get("LOGDELTA_DEMO_OUT", "demo_output")
os.makedirs(out, exist_ok=True)

grid = Grid(12.0, 2401)
trace = gamma_sweep(-0.5, 0.5, 21, 1, grid)

for g, lam, n in zip(trace.gammas, trace.second_eigenvalue, trace.neg_count):
    print(f"gamma={g:+.2f}  second eigenvalue={lam:+.6f}  n(L1)={n}")

###############################################################################
# Compare the central difference at 0 with the first-order perturbation
# coefficient: the integral of |x| |phi'|^2 over the norm of phi', which for
# the Gaussian equals 2/sqrt(pi).

print(f"slope {trace.slope_at_zero:.6f} vs 2/sqrt(pi) = {2 / math.sqrt(math.pi):.6f}")
emit_svg([("second eigenvalue", trace.gammas, trace.second_eigenvalue)], "gamma", "eigenvalue",
         os.path.join(out, "branch.svg"), "second eigenvalue of L1")

"""
Peak-Gausson profiles
=====================

The standing wave of the log-NLS equation with a point interaction is a
Gaussian shifted away from (gamma > 0) or towards (gamma < 0) the origin
and reflected evenly, so it has a corner at x = 0.
"""

import os

import numpy as np

from logdelta import Grid, PhysParams, gausson, gausson_mass
from logdelta.core import charge
from logdelta.svg import emit_svg

out = os.environ.get("LOGDELTA_DEMO_OUT", "demo_output")
os.makedirs(out, exist_ok=True)

###############################################################################
# Attractive and repulsive couplings
# ----------------------------------
# For gamma = 2 the profile is a single peak at the origin; for gamma = -2
# the maxima sit at x = +-|gamma|/2 and the origin is a local minimum.

grid = Grid(6.0, 1201)
x = grid.nodes
series = []
for gamma in (2.0, 0.0, -2.0):
    phi = gausson(PhysParams(-1.0, gamma), grid).values.real
    series.append((f"gamma={gamma:g}", x, phi))
    print(f"gamma={gamma:+g}: max at x={x[np.argmax(phi)]:+.2f}, phi(0)={phi[grid.center]:.4f}")

emit_svg(series, "x", "phi", os.path.join(out, "profiles.svg"), "peak-Gausson profiles, omega=-1")

###############################################################################
# Mass and its frequency derivative
# ---------------------------------
# The squared L2 norm is e^{omega+1} sqrt(pi) erfc(gamma/2). It is its own
# omega-derivative, hence positive, and this fixes p = 1 in the stability
# count for every coupling.

for gamma in (-2.0, -1.0, 1.0, 2.0):
    p = PhysParams(-1.0, gamma)
    print(f"gamma={gamma:+g}: mass {gausson_mass(p):.6f}, 2*charge on the mesh {2 * charge(gausson(p, grid)):.6f}")

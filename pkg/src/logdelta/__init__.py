"""Orbital stability of Gausson standing waves for the logarithmic NLS
equation with a delta interaction: discretized linearized operators,
a parabolic-cylinder eigenvalue oracle and split-step dynamics."""

from .core import (
    Grid,
    PhysParams,
    Sector,
    StabilityVerdict,
    Verdict,
    WaveField,
    charge,
    energy,
    gausson,
    gausson_mass,
    gausson_profile,
    orbital_distance,
    wtilde_inner,
    wtilde_norm,
)
from .evolution import EvolutionConfig, OrbitTrace, evolve, perturbation, strang_step
from .specfun import MatchingProblem, matching_residual, merged_eigs, parabolic_u, semianalytic_eigs
from .spectral import (
    DiscretizationError,
    Parity,
    TridiagOperator,
    assemble_h_delta,
    assemble_l,
    eigenvalues_bisection,
    eigenvector_inverse_iteration,
    gamma_sweep,
    neg_count_sturm,
    sector_restrict,
    stability_index,
)

__version__ = "0.1.0"

"""Bipartite entanglement growth in spin-1/2 chains and ladders.

Analytic purity bounds built from the cut-crossing interaction, a TEBD engine
for matrix product states and a dense exact-evolution oracle.
"""

from .bounds import (
    BoundConstants,
    SchmidtSpectrum,
    ThetaFactorization,
    bound_constants,
    combined_lower_bound,
    compute_chi,
    compute_mu,
    crossover_time,
    cube_trace_hardy_bound,
    cube_trace_rank_bound,
    entropy_floor,
    general_purity_envelope,
    long_time_lower_bound,
    rank_refined_lower_bound,
    short_time_lower_bound,
    theta_factorization,
)
from .closed_forms import ghz_ising_purity, product_ising_purity, short_time_quadratic_coefficient
from .errors import (
    CapacityError,
    DomainError,
    InfeasibleError,
    InvalidCutError,
    InvalidSizeError,
    UnsupportedModelError,
    ZeroBoundaryError,
)
from .exact import (
    DenseState,
    dense_from_spec,
    evolve_dense,
    purity_rate_formula,
    rate_bound_check,
    reduced_schmidt_spectrum,
)
from .lattice import (
    BondTerm,
    CutBondInteraction,
    PauliTerm,
    SpinLatticeModel,
    boundary_site_count,
    build_coupled_ising_chains,
    build_xx_chain,
    build_xxz_chain,
    extract_cut_interaction,
)
from .mps import (
    EvolutionRecord,
    MatrixProductState,
    TrotterScheme,
    TruncationPolicy,
    cut_entropy,
    cut_purity,
    evolve_and_sample,
    mps_from_basis_product,
    trotter_sweep,
)

__version__ = "0.1.0"

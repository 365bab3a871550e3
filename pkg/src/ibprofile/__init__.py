"""Interior-boundary assortativity profiles, directed spectral diagnostics and SIS equilibria."""

__version__ = "0.1.0"

from .assort import (
    AssortProfile,
    Undefined,
    directed_modularity,
    multipartite_rho,
    profile_categorical,
    profile_scalar,
    rho_categorical,
    rho_modularity_consistency,
    rho_scalar,
)
from .collapse import collapse_decomposition, sign_conditions
from .genlab import SBMSpec, chain_sweep, fixture, sbm
from .graph import Graph, build_graph, is_strongly_connected, spectral_radius, strengths, undirected_projection
from .sis import SISParams, boundary_dominance, endemic_equilibrium, implication_chain, integrate, sis_rhs
from .spectral import (
    WalkSpec,
    cheeger_check,
    cheeger_constant_bruteforce,
    chung_laplacian,
    directed_conductance,
    eigen_sym,
    spectral_proxy,
    stationary,
    transition_matrix,
)
from .stratify import Partition, classify_roles, participation, refinement_masses, stratify_arcs

"""Limit roots of line bundles on nodal curves and the numerical side of the
compactified Picard scheme, computed exactly from the dual graph."""
from .balanced import (
    BalancedVerdict,
    Status,
    Witness,
    basic_inequality,
    enumerate_balanced,
    is_balanced,
    is_stably_balanced,
    r2_identity_check,
)
from .exceptions import GenusError, InconsistentClassError, RootStrataError, SizeGateError
from .graph import (
    DualGraph,
    Multidegree,
    Multigraph,
    QuasistableModel,
    Subcurve,
    arithmetic_genus,
    betti1,
    blow_up,
    k_Z,
    omega_degree,
    omega_multidegree,
    sigma_betti1,
    sigma_graph,
    w_Z,
)
from .homology import EdgeChain, ResidueVector, boundary, coboundary, residue_class, solve_boundary
from .picard import (
    chi_diagnostics,
    is_realizable,
    riass_dimension,
    shat_fiber,
    step2_exists,
    twister_candidates,
)
from .strata import (
    FactoredCount,
    WeightedSubgraph,
    admissible_weightings,
    fiber_inventory,
    limit_root_multidegree,
    spin_class,
    stratum_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Normal subgroup lattices of finite groups, their coarse lower topology,
and exhaustive checks that the proper part is a spectral space."""

from .catalog import catalog
from .group import (
    Group,
    Subgroup,
    Subset,
    conjugacy_classes,
    direct_product,
    from_permutation_generators,
    generated_subgroup,
    is_normal,
    normal_closure,
    validate_cayley_table,
)
from .kernels import BACKEND
from .lattice import (
    NormalLattice,
    enumerate_normal_subgroups,
    has_maximal_normal_subgroup,
    hasse_edges,
    join_family,
    maximal_normal_subgroups,
    meet_family,
    proper_points,
)
from .topology import FiniteSpace, closure, coarse_lower_topology, subspace, v_set
from .verify import check_spectral, verify_theorem_main

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FiniteSpace", "Group", "NormalLattice", "Subgroup", "Subset",
    "catalog", "check_spectral", "closure", "coarse_lower_topology",
    "conjugacy_classes", "direct_product", "enumerate_normal_subgroups",
    "from_permutation_generators", "generated_subgroup",
    "has_maximal_normal_subgroup", "hasse_edges", "is_normal", "join_family",
    "maximal_normal_subgroups", "meet_family", "normal_closure", "proper_points",
    "subspace", "v_set", "validate_cayley_table", "verify_theorem_main",
]

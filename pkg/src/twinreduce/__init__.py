"""Trigraph contraction sequences, reduced graph parameters, and
product-structure sequence builders with verifiable per-step witnesses."""

__version__ = "0.1.0"

from .graph import Graph
from .trigraph import (
    Merge,
    Partition,
    ReductionSequence,
    Trigraph,
    replay,
    sequence_width,
    sequence_witness_width,
    trigraph_of_partition,
)
from .params import (
    ParamResult,
    TreeDecomposition,
    bandwidth_exact,
    bandwidth_heuristic,
    clique_counts,
    col_s_exact,
    col_s_greedy,
    degeneracy,
    max_component_size,
    max_degree,
    pathwidth_exact,
    treewidth_exact,
)
from .oracle import (
    OracleConfig,
    OracleResult,
    reduced_f_exact,
    reduced_f_upper_greedy,
)
from .diversity import (
    DistanceProfile,
    DiversityReport,
    check_bound,
    diversity,
    profile,
    second_profile_partition,
    shallow_minor_witness,
)
from .product import (
    ProductCertificate,
    RootedTreeDecomposition,
    apex_product_sequence,
    power_sequence,
    product_path_sequence,
    strong_product,
    validate_certificate,
)

__all__ = [
    "Graph",
    "Merge",
    "Partition",
    "ReductionSequence",
    "Trigraph",
    "replay",
    "sequence_width",
    "sequence_witness_width",
    "trigraph_of_partition",
    "ParamResult",
    "TreeDecomposition",
    "bandwidth_exact",
    "bandwidth_heuristic",
    "clique_counts",
    "col_s_exact",
    "col_s_greedy",
    "degeneracy",
    "max_component_size",
    "max_degree",
    "pathwidth_exact",
    "treewidth_exact",
    "OracleConfig",
    "OracleResult",
    "reduced_f_exact",
    "reduced_f_upper_greedy",
    "DistanceProfile",
    "DiversityReport",
    "check_bound",
    "diversity",
    "profile",
    "second_profile_partition",
    "shallow_minor_witness",
    "ProductCertificate",
    "RootedTreeDecomposition",
    "apex_product_sequence",
    "power_sequence",
    "product_path_sequence",
    "strong_product",
    "validate_certificate",
    "__version__",
]

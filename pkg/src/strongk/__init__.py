"""Strong subgraph k-arc-connectivity: exact computation, certificates and
the structural results around it, checked at small scale."""
from .digraph import (
    Digraph,
    DigraphError,
    UndirectedGraph,
    biorient,
    cartesian_product,
    complement,
    complete_digraph,
    from_arc_list,
    is_strong,
    standard_family,
)
from .solver import (
    CapExceeded,
    LambdaResult,
    Packing,
    decide_lambda_S,
    lambda_k_exact,
    lambda_S_exact,
    oracle_lambda_S,
    verify_packing,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "Digraph",
    "DigraphError",
    "LambdaResult",
    "Packing",
    "UndirectedGraph",
    "biorient",
    "cartesian_product",
    "complement",
    "complete_digraph",
    "decide_lambda_S",
    "from_arc_list",
    "is_strong",
    "lambda_S_exact",
    "lambda_k_exact",
    "oracle_lambda_S",
    "standard_family",
    "verify_packing",
]

"""Sparse-half search and certified local-density analysis for K4-free graphs."""

__version__ = "0.1.0"

from .errors import (
    BudgetExhausted,
    CounterexampleCandidate,
    Graph6Error,
    OracleCapError,
    PreconditionError,
    TheoremViolation,
)
from .graphs import (
    Graph,
    JoinSplit,
    TriangleStats,
    VertexSubset,
    blow_up,
    blow_up_with_blocks,
    build_graph,
    clique_check,
    codegree,
    complete_graph,
    cycle_graph,
    edge_counts,
    edges_between,
    edges_within,
    generate,
    independent_set_search,
    is_connected,
    join_decompose,
    maximalize_k4free,
    petersen_graph,
    triangle_stats,
    turan_graph,
)
from .graph6 import load_graph6_file, parse_graph6, to_graph6

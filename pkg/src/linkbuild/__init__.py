"""Backlink selection for PageRank maximization of a target node."""

from .graph import (
    DirectedGraph,
    EdgeListParseError,
    GraphError,
    add_edge,
    build_graph,
    load_edge_list,
    save_edge_list,
    with_backlinks,
)
from .surfer import (
    ConvergenceError,
    SurferMetrics,
    SurferParams,
    pagerank,
    reach_probabilities,
    reachability,
    surfer_metrics,
    transition_row,
    visits_zxx,
)
from .selectors import (
    SelectionError,
    SelectionResult,
    candidate_set,
    exhaustive_select,
    naive_select,
    pi_greedy_select,
    r_greedy_select,
)
from .families import ConstructionError, FamilyInstance, cycle_vs_sink, lambda_param, sink_vs_sink

__version__ = "0.1.0"

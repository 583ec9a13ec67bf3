"""Deterministic center selection by hitting growable balls, with bundle and distance-oracle builders."""
from .bundles import BundleSet, build_bundles, verify_bundles
from .engine import CenterSelection, CostFunction, evaluate_cost, select_centers
from .graph import Graph, dijkstra, make_constant_degree, parse_graph, read_graph
from .tz import Oracle, build_oracle, query

__all__ = [
    "BundleSet",
    "CenterSelection",
    "CostFunction",
    "Graph",
    "Oracle",
    "build_bundles",
    "build_oracle",
    "dijkstra",
    "evaluate_cost",
    "make_constant_degree",
    "parse_graph",
    "query",
    "read_graph",
    "select_centers",
    "verify_bundles",
]

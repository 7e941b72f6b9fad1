"""Recombining machine-learned game graphs via conceptual expansion."""

from expansionforge._core import (  # noqa: F401
    GameGraph,
    blend_search,
    expand,
    ga_search,
    generate_fixture,
    graph_distance,
    knn_select,
    load_graph,
    loads,
    project,
    save_graph,
    validate,
)

__all__ = [
    "GameGraph",
    "blend_search",
    "expand",
    "ga_search",
    "generate_fixture",
    "graph_distance",
    "knn_select",
    "load_graph",
    "loads",
    "project",
    "save_graph",
    "validate",
]

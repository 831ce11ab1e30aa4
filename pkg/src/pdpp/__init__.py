"""Planar disjoint paths toolkit.

Solves the vertex-disjoint paths problem on planar graphs by iteratively
deleting certified irrelevant vertices and finishing with dynamic programming
on a branch/tree decomposition, and ships the structural analysis machinery
(concentric cycles, cheap linkages, segment trees, tilted grids, grid
rerouting) used to certify the reduction.
"""

from .plane import (
    CheckResult,
    Cycle,
    DiskRegion,
    EmbeddingError,
    GridMinorModel,
    PlaneGraph,
    PlaneGraphError,
    TopologicalMinorModel,
    centers,
    closed_interior,
    make_grid,
    plane_graph_from_edges,
    verify_minor_model,
)

__all__ = [
    "CheckResult",
    "Cycle",
    "DiskRegion",
    "EmbeddingError",
    "GridMinorModel",
    "PlaneGraph",
    "PlaneGraphError",
    "TopologicalMinorModel",
    "centers",
    "closed_interior",
    "make_grid",
    "plane_graph_from_edges",
    "verify_minor_model",
]

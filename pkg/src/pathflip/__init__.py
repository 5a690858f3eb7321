"""Flip graphs of non-crossing spanning paths on convex point sets.

The flip graph has one vertex per non-crossing spanning path of n points in
convex position; two paths are adjacent when they differ by exchanging a
single edge.  This package builds these graphs, anonymizes them, and (the
interesting direction) reconstructs every path label from bare adjacency,
uniquely up to the 2n symmetries of the point set.
"""

from .fileio import Config
from .geometry import (
    DihedralElement,
    Edge,
    dihedral_apply,
    dihedral_elements,
    edge,
    edges_cross,
    is_boundary,
)
from .pathgraph import (
    AbstractGraph,
    CliqueClassification,
    PathGraph,
    StatsReport,
    anonymize,
    build,
    classify_edge_cliques,
    stats,
)
from .paths import (
    SpanningPath,
    UnsupportedN,
    enumerate_paths,
    path_neighbors,
    path_type,
    validate_path,
)
from .reconstruct import (
    NotAPathGraphError,
    ReconResult,
    ReconState,
    complete_path,
    reconstruct_all,
)
from .verify import (
    NoDihedralMatch,
    VerificationReport,
    automorphism_group,
    check_reconstruction,
    invariant_suite,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractGraph",
    "CliqueClassification",
    "Config",
    "DihedralElement",
    "Edge",
    "NoDihedralMatch",
    "NotAPathGraphError",
    "PathGraph",
    "ReconResult",
    "ReconState",
    "SpanningPath",
    "StatsReport",
    "UnsupportedN",
    "VerificationReport",
    "anonymize",
    "automorphism_group",
    "build",
    "check_reconstruction",
    "classify_edge_cliques",
    "complete_path",
    "dihedral_apply",
    "dihedral_elements",
    "edge",
    "edges_cross",
    "enumerate_paths",
    "invariant_suite",
    "is_boundary",
    "path_neighbors",
    "path_type",
    "reconstruct_all",
    "stats",
    "validate_path",
    "__version__",
]

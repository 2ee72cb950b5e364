"""Percolation on hierarchical fractal graphs.

Generators for the diamond, subdivided-triangle, gasket and hexacarpet
families; uniform-label bond percolation with bottleneck-threshold sweeps;
the exact diamond crossing recursion; planar-dual complementarity; and the
region isoperimetric bound.  See the CLI (``fractalperc --help``) for the
reproducible experiment harness.
"""

from .diamond import f_eval, f_iterate, f_trace, monotonicity_table, solve_pc, exact_median
from .duality import DualMap, complementarity_check, dual_with_arcs, pre_dual
from .generators import (
    CollapseResult,
    DiamondParams,
    EmbeddingCertificate,
    GasketComplex,
    Triangulation,
    collapse_pi,
    embed_diamond_in_T,
    gen_barycentric,
    gen_diamond,
    gen_gasket,
)
from .graph import (
    CapabilityError,
    DisjointSet,
    Multigraph,
    TerminalSpec,
    are_isomorphic,
    connected,
    quotient,
)
from .isoperimetry import (
    FaceRegion,
    boundary_edge_count,
    isoperimetric_check,
    region_area,
    region_perimeter,
)
from .percolation import (
    Environment,
    ThetaCurve,
    ThresholdRecord,
    bottleneck_threshold,
    coupling_experiment,
    origin_cluster_size,
    pc_estimate_diamond,
    theta_curve,
)

__all__ = [
    "CapabilityError",
    "CollapseResult",
    "DiamondParams",
    "DisjointSet",
    "DualMap",
    "EmbeddingCertificate",
    "Environment",
    "FaceRegion",
    "GasketComplex",
    "Multigraph",
    "TerminalSpec",
    "ThetaCurve",
    "ThresholdRecord",
    "Triangulation",
    "are_isomorphic",
    "bottleneck_threshold",
    "boundary_edge_count",
    "collapse_pi",
    "complementarity_check",
    "connected",
    "coupling_experiment",
    "dual_with_arcs",
    "embed_diamond_in_T",
    "exact_median",
    "f_eval",
    "f_iterate",
    "f_trace",
    "gen_barycentric",
    "gen_diamond",
    "gen_gasket",
    "isoperimetric_check",
    "monotonicity_table",
    "origin_cluster_size",
    "pc_estimate_diamond",
    "pre_dual",
    "quotient",
    "region_area",
    "region_perimeter",
    "solve_pc",
    "theta_curve",
]

__version__ = "0.1.0"

"""Planar clusters with a volume density and an anisotropic, possibly
asymmetric perimeter density.

The package evaluates weighted perimeter and volume of polygonal clusters,
solves weighted three-arm junction problems, builds explicit
perimeter-decreasing competitors inside small disks, minimizes cluster
perimeter at fixed chamber volumes, and checks junction balance and
regularity diagnostics on the results.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .builders import (
    double_bubble_cluster,
    polygon_chamber,
    regular_polygon_chamber,
    square_cross_cluster,
)
from .cluster import (
    Cluster,
    Edge,
    chamber_perimeter,
    growth_estimate,
    isoperimetric_check,
    perimeter_breakdown,
    relative_perimeter,
    union_perimeter,
    validate,
    weighted_perimeter,
    weighted_volume,
    weighted_volume_plain,
)
from .density import Density, DiskDomain, Rect, ball_volume, validate_density
from .gauge import (
    EllipseGauge,
    EuclideanGauge,
    Gauge,
    LpGauge,
    RotatedGauge,
    ShiftedDiskGauge,
    SmoothedL1Gauge,
    SymmetrizedGauge,
    TabulatedGauge,
    TangentGauge,
    gauge_from_spec,
    interface_gauge,
    roundedness_constant,
    strict_convexity_margin,
    tangent_gauge,
    unit_ball_boundary,
)
from .optimizer import (
    BallBoundReport,
    DiagnoseReport,
    JunctionInfo,
    OptimizationProblem,
    SolveOptions,
    SolveReport,
    ball_bound_check,
    detect_junctions,
    interface_perimeter,
    minimize,
    resample_cluster,
    steiner_diagnose,
)
from .report import make_report, render_report, write_report
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .slices import (
    CompetitorNetwork,
    ImproveResult,
    NetSegment,
    SliceConfig,
    best_move,
    enumerate_moves,
    improve,
    move_chord,
    move_join_whites,
    move_slide,
    move_tripod,
    oriented_weight,
    path_length_gauge,
    shortcut_path,
    slice_perimeter,
)
from .steiner import (
    AdmissibleTriple,
    FermatResult,
    admissible_pairs,
    fermat_modes_for_colors,
    fermat_point,
    junction_residual,
)

__all__ = [
    "__version__",
    "AdmissibleTriple",
    "BallBoundReport",
    "Cluster",
    "CompetitorNetwork",
    "Density",
    "DiagnoseReport",
    "DiskDomain",
    "Edge",
    "EllipseGauge",
    "EuclideanGauge",
    "FermatResult",
    "Gauge",
    "ImproveResult",
    "JunctionInfo",
    "LpGauge",
    "NetSegment",
    "OptimizationProblem",
    "Rect",
    "RotatedGauge",
    "Scenario",
    "ScenarioError",
    "ShiftedDiskGauge",
    "SliceConfig",
    "SmoothedL1Gauge",
    "SolveOptions",
    "SolveReport",
    "SymmetrizedGauge",
    "TabulatedGauge",
    "TangentGauge",
    "admissible_pairs",
    "ball_bound_check",
    "ball_volume",
    "best_move",
    "chamber_perimeter",
    "detect_junctions",
    "double_bubble_cluster",
    "enumerate_moves",
    "fermat_modes_for_colors",
    "fermat_point",
    "gauge_from_spec",
    "improve",
    "interface_gauge",
    "interface_perimeter",
    "growth_estimate",
    "isoperimetric_check",
    "junction_residual",
    "load_scenario",
    "make_report",
    "minimize",
    "move_chord",
    "move_join_whites",
    "move_slide",
    "move_tripod",
    "oriented_weight",
    "path_length_gauge",
    "parse_scenario",
    "perimeter_breakdown",
    "polygon_chamber",
    "regular_polygon_chamber",
    "relative_perimeter",
    "render_report",
    "resample_cluster",
    "roundedness_constant",
    "shortcut_path",
    "slice_perimeter",
    "square_cross_cluster",
    "steiner_diagnose",
    "strict_convexity_margin",
    "tangent_gauge",
    "union_perimeter",
    "unit_ball_boundary",
    "validate",
    "validate_density",
    "weighted_perimeter",
    "weighted_volume",
    "weighted_volume_plain",
    "write_report",
]

"""cleanroutes: find and promote lower-NO2 walking/cycling school routes.

Library layers (bottom up): network model, k-shortest-path routing with
feasibility screening, raster-based exposure scoring, switching-benefit
aggregation, information packages, and a store-backed study workflow with an
HTTP API and batch CLI on top.
"""

from .benefit import (
    BenefitReport,
    CohortStats,
    DeltaStats,
    RiskModel,
    ShiftMatrix,
    cohort_stats,
    compare,
    load_risk_models,
    relative_risk,
    render_shift_matrix,
    shift_matrix,
)
from .errors import (
    CleanRoutesError,
    ConflictError,
    ConsistencyError,
    CoverageError,
    IntegrityError,
    InvalidDataError,
    NotFoundError,
    ParseError,
)
from .exposure import (
    CATEGORY_COLORS,
    DEFAULT_HOUR,
    DEFAULT_SAMPLE_INTERVAL_M,
    ConcentrationRaster,
    ExposureCategory,
    ExposureSummary,
    SamplePoint,
    categorize,
    load_raster,
    lookup_concentration,
    rank_alternatives,
    resample_route,
    route_exposure,
    sample_route,
)
from .infopack import (
    ContentBlock,
    ContentCatalog,
    InfoPackage,
    build_package,
    load_content_catalog,
    parse_package,
    render_package,
)
from .network import (
    Coord,
    StreetEdge,
    StreetGraph,
    StreetNode,
    ValidationReport,
    Violation,
    convert_lonlat_network,
    load_network,
    polyline_length,
    serialize_network,
    snap_point,
    validate_graph,
)
from .routing import (
    DEFAULT_K,
    FeasibilityReport,
    Route,
    RouteMetrics,
    TravelMode,
    Verdict,
    build_route,
    generate_alternatives,
    k_shortest_paths,
    route_metrics,
    screen_feasible,
)
from .store import FeedbackRecord, Participant, RouteRecord, Store
from .workflow import EffectivenessSummary, Workspace

__version__ = "0.1.0"

__all__ = [
    "BenefitReport", "CohortStats", "DeltaStats", "RiskModel", "ShiftMatrix",
    "cohort_stats", "compare", "load_risk_models", "relative_risk",
    "render_shift_matrix", "shift_matrix",
    "CleanRoutesError", "ConflictError", "ConsistencyError", "CoverageError",
    "IntegrityError", "InvalidDataError", "NotFoundError", "ParseError",
    "CATEGORY_COLORS", "DEFAULT_HOUR", "DEFAULT_SAMPLE_INTERVAL_M",
    "ConcentrationRaster", "ExposureCategory", "ExposureSummary", "SamplePoint",
    "categorize", "load_raster", "lookup_concentration", "rank_alternatives",
    "resample_route", "route_exposure", "sample_route",
    "ContentBlock", "ContentCatalog", "InfoPackage", "build_package",
    "load_content_catalog", "parse_package", "render_package",
    "Coord", "StreetEdge", "StreetGraph", "StreetNode", "ValidationReport",
    "Violation", "convert_lonlat_network", "load_network", "polyline_length",
    "serialize_network", "snap_point", "validate_graph",
    "DEFAULT_K", "FeasibilityReport", "Route", "RouteMetrics", "TravelMode",
    "Verdict", "build_route", "generate_alternatives", "k_shortest_paths",
    "route_metrics", "screen_feasible",
    "FeedbackRecord", "Participant", "RouteRecord", "Store",
    "EffectivenessSummary", "Workspace",
    "__version__",
]

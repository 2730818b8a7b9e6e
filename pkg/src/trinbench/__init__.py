"""trinbench: assessment workbench for continuously valued binary
classifiers with a reject option (trinary decisions)."""

from .curves import (
    BinSpec,
    CurvePoint,
    CurveSeries,
    HeatmapCell,
    bandwidth_series,
    feature_histogram,
    perf_conf_histogram,
    pr_curve,
    rejection_curve,
    reliability_curve,
    roc_curve,
    scatter_bins,
    threshold_grid,
)
from .dataset import (
    ClassifierResult,
    Dataset,
    Instance,
    ValidationReport,
    get_instance,
    list_instances,
    load_dataset,
)
from .errors import EngineError
from .metrics import (
    MetricValue,
    WeightedConfusion,
    auc,
    binary_metric,
    brier,
    combine_weights,
    confusion,
)
from .sampling import (
    SampleResult,
    SampleSpec,
    bootstrap,
    best_mcc_threshold,
    multiplicity_weights,
    partition,
    replicate_sweep,
)
from .selections import (
    EvalContext,
    Predicate,
    PredicateLeaf,
    Selection,
    SelectionExpr,
    SetOp,
    evaluate,
    overlap,
    parse_expr,
    step_focus,
)
from .session import Session, SessionStore
from .trinary import (
    CATEGORIES,
    OperatingPoint,
    TrinaryCounts,
    classify,
    derive_classifier,
    trinary_summary,
)

__version__ = "0.1.0"

__all__ = [
    "BinSpec", "CurvePoint", "CurveSeries", "HeatmapCell",
    "bandwidth_series", "feature_histogram", "perf_conf_histogram",
    "pr_curve", "rejection_curve", "reliability_curve", "roc_curve",
    "scatter_bins", "threshold_grid",
    "ClassifierResult", "Dataset", "Instance", "ValidationReport",
    "get_instance", "list_instances", "load_dataset",
    "EngineError",
    "MetricValue", "WeightedConfusion", "auc", "binary_metric", "brier",
    "combine_weights", "confusion",
    "SampleResult", "SampleSpec", "bootstrap", "best_mcc_threshold",
    "multiplicity_weights", "partition", "replicate_sweep",
    "EvalContext", "Predicate", "PredicateLeaf", "Selection",
    "SelectionExpr", "SetOp", "evaluate", "overlap", "parse_expr", "step_focus",
    "Session", "SessionStore",
    "CATEGORIES", "OperatingPoint", "TrinaryCounts", "classify",
    "derive_classifier", "trinary_summary",
]

"""Meta-analysis of binomial proportions on arcsine-family transformed scales,
with diagnostics for the pathologies the double arcsine introduces."""

from .backtransform import (
    BackTransformConvention,
    BackTransformResult,
    implied_sample_size,
    invert_double_arcsine,
    invert_single_arcsine,
    miller_closed_form,
)
from .diagnostics import (
    DiagnosticsReport,
    Finding,
    FindingKind,
    Severity,
    check_pooled_between,
    check_preimage,
    detect_order_reversals,
    overlap_report,
)
from .pooling import PooledResult, pool_fixed, pool_random_dl, z_quantile
from .report import (
    AnalysisConfig,
    AnalysisReport,
    emit_curves,
    emit_stabilization,
    parse_studies,
    report_to_csv,
    report_to_dict,
    report_to_json,
    run_analysis,
)
from .stabilization import VariancePoint, exact_variance, variance_curve
from .transforms import (
    StudyRecord,
    ThetaRange,
    TransformKind,
    TransformedStudy,
    approx_variance,
    continuous_forward,
    double_arcsine,
    single_arcsine,
    theta_range,
    transform_study,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "BackTransformConvention",
    "BackTransformResult",
    "DiagnosticsReport",
    "Finding",
    "FindingKind",
    "PooledResult",
    "Severity",
    "StudyRecord",
    "ThetaRange",
    "TransformKind",
    "TransformedStudy",
    "VariancePoint",
    "approx_variance",
    "check_pooled_between",
    "check_preimage",
    "continuous_forward",
    "detect_order_reversals",
    "double_arcsine",
    "emit_curves",
    "emit_stabilization",
    "exact_variance",
    "implied_sample_size",
    "invert_double_arcsine",
    "invert_single_arcsine",
    "miller_closed_form",
    "overlap_report",
    "parse_studies",
    "pool_fixed",
    "pool_random_dl",
    "report_to_csv",
    "report_to_dict",
    "report_to_json",
    "run_analysis",
    "single_arcsine",
    "theta_range",
    "transform_study",
    "variance_curve",
    "z_quantile",
]

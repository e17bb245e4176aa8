"""CSV ingestion, analysis orchestration, and report serialization.

The full pipeline is: transform each study, pool on the transformed scale,
choose an implied sample size, back-transform the point estimate and both
interval endpoints (each clamped independently), then run diagnostics.
Reports serialize deterministically: fixed key order, floats at 12
significant digits, no timestamps.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

from .backtransform import (
    BackTransformConvention,
    BackTransformResult,
    implied_sample_size,
    invert_double_arcsine,
    invert_single_arcsine,
)
from .diagnostics import (
    DiagnosticsReport,
    Finding,
    Severity,
    check_pooled_between,
    check_preimage,
    detect_order_reversals,
    overlap_report,
)
from .pooling import PooledResult, pool_fixed, pool_random_dl
from .transforms import (
    StudyRecord,
    TransformKind,
    TransformedStudy,
    continuous_forward,
    transform_study,
)

__all__ = [
    "SCHEMA",
    "AnalysisConfig",
    "AnalysisReport",
    "parse_studies",
    "run_analysis",
    "emit_curves",
    "emit_stabilization",
    "report_to_dict",
    "report_to_json",
    "report_to_csv",
    "config_from_dict",
]

SCHEMA = "prop-meta/1"


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything needed to rerun an analysis on the same input."""

    transform: TransformKind = TransformKind.DOUBLE_ARCSINE
    model: str = "fixed"  # "fixed" | "dl"
    convention: BackTransformConvention = BackTransformConvention.inverse_variance()
    level: float = 0.95
    diagnostics_enabled: bool = True
    output_format: str = "json"  # "json" | "csv"

    def __post_init__(self) -> None:
        if self.model not in ("fixed", "dl"):
            raise ValueError(f"unknown pooling model {self.model!r}")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"confidence level must be in (0, 1), got {self.level}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass(frozen=True)
class AnalysisReport:
    """Self-contained result of one analysis run."""

    studies: tuple[StudyRecord, ...]
    transformed: tuple[TransformedStudy, ...]
    pooled: PooledResult
    back: BackTransformResult
    diagnostics: DiagnosticsReport
    config: AnalysisConfig

    @property
    def has_errors(self) -> bool:
        return any(f.severity is Severity.ERROR for f in self.diagnostics.findings)


class StudyInputError(ValueError):
    """Raised for malformed study CSV input; message carries the line number."""


def parse_studies(stream) -> list[StudyRecord]:
    """Read studies from CSV with columns events,total and optional label.

    Rows without a label get "study_<row-index>" (1-based). Field whitespace
    is trimmed. Malformed rows raise StudyInputError naming the offending
    1-based line number.
    """
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise StudyInputError("input is empty; expected a CSV header row")
    fieldnames = [f.strip() for f in reader.fieldnames]
    for required in ("events", "total"):
        if required not in fieldnames:
            raise StudyInputError(f"missing required column {required!r}")
    studies: list[StudyRecord] = []
    seen: set[str] = set()
    for index, row in enumerate(reader, start=1):
        line = reader.line_num
        cleaned = {
            (k.strip() if k else k): (v.strip() if isinstance(v, str) else v)
            for k, v in row.items()
        }
        label = cleaned.get("label") or f"study_{index}"
        if label in seen:
            raise StudyInputError(f"line {line}: duplicate label {label!r}")
        seen.add(label)
        try:
            events = int(cleaned["events"])
            total = int(cleaned["total"])
        except (TypeError, ValueError):
            raise StudyInputError(
                f"line {line}: events and total must be integers, "
                f"got events={cleaned.get('events')!r}, total={cleaned.get('total')!r}"
            ) from None
        if total <= 0:
            raise StudyInputError(f"line {line}: total must be positive, got {total}")
        if events < 0:
            raise StudyInputError(f"line {line}: events must be non-negative, got {events}")
        if events > total:
            raise StudyInputError(f"line {line}: events exceeds total ({events} > {total})")
        studies.append(StudyRecord(label=label, events=events, total=total))
    return studies


def _clamp_single(theta: float) -> tuple[float, bool]:
    if theta < 0.0:
        return 0.0, True
    if theta > math.pi / 2.0:
        return 1.0, True
    return invert_single_arcsine(theta), False


def _back_transform(
    pooled: PooledResult,
    kind: TransformKind,
    implied_n: float,
) -> BackTransformResult:
    if kind is TransformKind.DOUBLE_ARCSINE:
        p_hat, cl_point = invert_double_arcsine(pooled.theta_hat, implied_n)
        p_lo, cl_lo = invert_double_arcsine(pooled.ci_lo, implied_n)
        p_hi, cl_hi = invert_double_arcsine(pooled.ci_hi, implied_n)
    else:
        p_hat, cl_point = _clamp_single(pooled.theta_hat)
        p_lo, cl_lo = _clamp_single(pooled.ci_lo)
        p_hi, cl_hi = _clamp_single(pooled.ci_hi)
    return BackTransformResult(
        p_hat=p_hat,
        ci_lo=p_lo,
        ci_hi=p_hi,
        implied_n=implied_n,
        clamped_point=cl_point,
        clamped_lo=cl_lo,
        clamped_hi=cl_hi,
    )


def run_analysis(
    studies: Sequence[StudyRecord], config: AnalysisConfig
) -> AnalysisReport:
    """Run the full transform / pool / back-transform / diagnose pipeline."""
    if not studies:
        raise ValueError("analysis requires at least one study")
    transformed = tuple(transform_study(s, config.transform) for s in studies)
    if config.model == "dl":
        pooled = pool_random_dl(transformed, config.level)
    else:
        pooled = pool_fixed(transformed, config.level)
    implied_n = implied_sample_size(
        studies, config.convention, pooled_variance=pooled.se**2
    )
    back = _back_transform(pooled, config.transform, implied_n)

    findings: list[Finding] = []
    if config.diagnostics_enabled:
        if len(studies) >= 2:
            findings.extend(detect_order_reversals(studies, config.transform))
            overlap = overlap_report(studies, config.transform)
            if overlap is not None:
                findings.append(overlap)
        preimage = check_preimage(
            pooled.theta_hat, implied_n, config.transform, severity=Severity.ERROR
        )
        if preimage is not None:
            findings.append(preimage)
        between = check_pooled_between(back.p_hat, studies)
        if between is not None:
            findings.append(between)
    totals = [s.total for s in studies]
    diagnostics = DiagnosticsReport(
        findings=tuple(findings),
        n_studies=len(studies),
        n_min=min(totals),
        n_max=max(totals),
        transform=config.transform,
    )
    return AnalysisReport(
        studies=tuple(studies),
        transformed=transformed,
        pooled=pooled,
        back=back,
        diagnostics=diagnostics,
        config=config,
    )


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _num(x: float) -> float:
    """Round to 12 significant digits so serialization is reproducible."""
    return float(_fmt(x))


def config_to_dict(config: AnalysisConfig) -> dict:
    return {
        "transform": config.transform.value,
        "model": config.model,
        "n_convention": config.convention.method,
        "explicit_n": (
            _num(config.convention.explicit_n)
            if config.convention.explicit_n is not None
            else None
        ),
        "level": _num(config.level),
        "diagnostics": config.diagnostics_enabled,
        "format": config.output_format,
    }


def config_from_dict(data: dict) -> AnalysisConfig:
    """Rebuild a config from a report's config echo."""
    method = data["n_convention"]
    if method == "explicit":
        convention = BackTransformConvention.explicit(float(data["explicit_n"]))
    else:
        convention = BackTransformConvention(method)
    return AnalysisConfig(
        transform=TransformKind(data["transform"]),
        model=data["model"],
        convention=convention,
        level=float(data["level"]),
        diagnostics_enabled=bool(data["diagnostics"]),
        output_format=data.get("format", "json"),
    )


def report_to_dict(report: AnalysisReport) -> dict:
    """Report as plain data with fixed key order and 12-digit floats."""
    return {
        "schema": SCHEMA,
        "config": config_to_dict(report.config),
        "studies": [
            {
                "label": s.label,
                "events": s.events,
                "total": s.total,
                "p": _num(s.proportion),
                "theta": _num(t.theta),
                "variance": _num(t.variance),
            }
            for s, t in zip(report.studies, report.transformed)
        ],
        "pooled": {
            "theta_hat": _num(report.pooled.theta_hat),
            "se": _num(report.pooled.se),
            "ci_lo": _num(report.pooled.ci_lo),
            "ci_hi": _num(report.pooled.ci_hi),
            "model": report.pooled.model,
            "tau2": _num(report.pooled.tau2),
            "level": _num(report.pooled.level),
            "weights": [_num(w) for w in report.pooled.weights],
        },
        "back_transform": {
            "p_hat": _num(report.back.p_hat),
            "ci_lo": _num(report.back.ci_lo),
            "ci_hi": _num(report.back.ci_hi),
            "implied_n": _num(report.back.implied_n),
            "clamped_point": report.back.clamped_point,
            "clamped_lo": report.back.clamped_lo,
            "clamped_hi": report.back.clamped_hi,
        },
        "diagnostics": {
            "transform": report.diagnostics.transform.value,
            "n_studies": report.diagnostics.n_studies,
            "n_min": report.diagnostics.n_min,
            "n_max": report.diagnostics.n_max,
            "findings": [
                {
                    "kind": f.kind.value,
                    "severity": f.severity.value,
                    "studies": list(f.studies),
                    "detail": f.detail,
                }
                for f in report.diagnostics.findings
            ],
        },
    }


def report_to_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"


def report_to_csv(report: AnalysisReport) -> str:
    """Report as three CSV blocks: studies, pooled summary, findings."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", "events", "total", "p", "theta", "variance"])
    for s, t in zip(report.studies, report.transformed):
        writer.writerow(
            [s.label, s.events, s.total, _fmt(s.proportion), _fmt(t.theta), _fmt(t.variance)]
        )
    writer.writerow([])
    writer.writerow(["metric", "value"])
    pooled, back = report.pooled, report.back
    for key, value in [
        ("model", pooled.model),
        ("level", _fmt(pooled.level)),
        ("theta_hat", _fmt(pooled.theta_hat)),
        ("se", _fmt(pooled.se)),
        ("theta_ci_lo", _fmt(pooled.ci_lo)),
        ("theta_ci_hi", _fmt(pooled.ci_hi)),
        ("tau2", _fmt(pooled.tau2)),
        ("implied_n", _fmt(back.implied_n)),
        ("p_hat", _fmt(back.p_hat)),
        ("p_ci_lo", _fmt(back.ci_lo)),
        ("p_ci_hi", _fmt(back.ci_hi)),
        ("clamped_point", str(back.clamped_point).lower()),
        ("clamped_lo", str(back.clamped_lo).lower()),
        ("clamped_hi", str(back.clamped_hi).lower()),
    ]:
        writer.writerow([key, value])
    writer.writerow([])
    writer.writerow(["kind", "severity", "studies", "detail"])
    for f in report.diagnostics.findings:
        writer.writerow([f.kind.value, f.severity.value, ";".join(f.studies), f.detail])
    return out.getvalue()


def findings_to_csv(findings: Sequence[Finding]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kind", "severity", "studies", "detail"])
    for f in findings:
        writer.writerow([f.kind.value, f.severity.value, ";".join(f.studies), f.detail])
    return out.getvalue()


def emit_curves(n_list: Sequence[float], p_grid: Sequence[float]) -> str:
    """Transform-curve data as CSV: N,p,theta_double,theta_single.

    A final sentinel block with N=inf repeats the single arcsine in the
    theta_double column, marking the large-N limit.
    """
    if not n_list or not p_grid:
        raise ValueError("curve emission requires a non-empty N list and p grid")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["N", "p", "theta_double", "theta_single"])
    for n in n_list:
        for p in p_grid:
            theta_s = math.asin(math.sqrt(p))
            writer.writerow([_fmt(n), _fmt(p), _fmt(continuous_forward(p, n)), _fmt(theta_s)])
    for p in p_grid:
        theta_s = math.asin(math.sqrt(p))
        writer.writerow(["inf", _fmt(p), _fmt(theta_s), _fmt(theta_s)])
    return out.getvalue()


def emit_stabilization(n_list: Sequence[int], p_grid: Sequence[float]) -> str:
    """Variance-ratio data for both transforms as CSV."""
    from .stabilization import variance_curve

    if not n_list or not p_grid:
        raise ValueError("stabilization emission requires a non-empty N list and p grid")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kind", "N", "p", "exact_variance", "target", "ratio"])
    for kind in (TransformKind.DOUBLE_ARCSINE, TransformKind.SINGLE_ARCSINE):
        for n in n_list:
            for point in variance_curve(kind, n, p_grid):
                writer.writerow(
                    [
                        kind.value,
                        point.n,
                        _fmt(point.p),
                        _fmt(point.exact_variance),
                        _fmt(point.target),
                        _fmt(point.ratio),
                    ]
                )
    return out.getvalue()

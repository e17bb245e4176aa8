"""Pathology detection for proportion meta-analyses on arcsine scales.

The double arcsine maps studies with different sample sizes onto different
scales, which can reverse the ordering of proportions, leave pooled values
without a preimage, and push back-transformed estimates outside the range of
the observed proportions. The detectors here report each of these as a
structured finding; the single arcsine produces none of them by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .transforms import (
    StudyRecord,
    TransformKind,
    double_arcsine,
    single_arcsine,
    theta_range,
)

__all__ = [
    "FindingKind",
    "Severity",
    "Finding",
    "DiagnosticsReport",
    "detect_order_reversals",
    "check_preimage",
    "check_pooled_between",
    "overlap_report",
]

# thetas closer than this are treated as equal when flagging equal-p pairs
_THETA_TIE_TOL = 1e-12


class FindingKind(Enum):
    ORDER_REVERSAL = "order_reversal"
    NO_PREIMAGE = "no_preimage"
    POOLED_OUTSIDE_OBSERVED_RANGE = "pooled_outside_observed_range"
    PARTIAL_IMAGE_OVERLAP = "partial_image_overlap"


class Severity(Enum):
    WARNING = "warning"
    ERROR = "error"


@dataclass(frozen=True)
class Finding:
    """One detected pathology, with the studies involved and the numbers."""

    kind: FindingKind
    severity: Severity
    studies: tuple[str, ...]
    detail: str

    def __post_init__(self) -> None:
        if self.kind in (FindingKind.ORDER_REVERSAL, FindingKind.POOLED_OUTSIDE_OBSERVED_RANGE):
            if not self.studies:
                raise ValueError(f"{self.kind.value} finding requires involved studies")


@dataclass(frozen=True)
class DiagnosticsReport:
    """All findings for one dataset; an empty list means none detected."""

    findings: tuple[Finding, ...]
    n_studies: int
    n_min: int
    n_max: int
    transform: TransformKind


def _theta(study: StudyRecord, kind: TransformKind) -> float:
    if kind is TransformKind.DOUBLE_ARCSINE:
        return double_arcsine(study.events, study.total)
    return single_arcsine(study.events, study.total)


def detect_order_reversals(
    studies: Sequence[StudyRecord], kind: TransformKind
) -> list[Finding]:
    """Find study pairs whose proportion order flips on the transformed scale.

    Proportions are compared exactly in integer arithmetic (a_i*N_j vs
    a_j*N_i) so floating-point ties cannot produce false reversals. Pairs
    with equal proportions but unequal transformed values are reported under
    the same kind with a distinguishing detail, since they exhibit the same
    scale mismatch. The scan is pairwise and exhaustive.
    """
    if len(studies) < 2:
        raise ValueError("order-reversal detection requires at least two studies")
    findings = []
    pairs = sorted(
        (
            (studies[i], studies[j])
            for i in range(len(studies))
            for j in range(i + 1, len(studies))
        ),
        key=lambda pair: (pair[0].label, pair[1].label),
    )
    for si, sj in pairs:
        cross = si.events * sj.total - sj.events * si.total  # sign of p_i - p_j
        ti, tj = _theta(si, kind), _theta(sj, kind)
        dtheta = ti - tj
        if cross > 0 and dtheta < 0 or cross < 0 and dtheta > 0:
            findings.append(
                Finding(
                    kind=FindingKind.ORDER_REVERSAL,
                    severity=Severity.WARNING,
                    studies=(si.label, sj.label),
                    detail=(
                        f"p order reversed on transformed scale: "
                        f"{si.label} p={si.proportion:.6g} theta={ti:.6g}, "
                        f"{sj.label} p={sj.proportion:.6g} theta={tj:.6g}"
                    ),
                )
            )
        elif cross == 0 and abs(dtheta) > _THETA_TIE_TOL:
            findings.append(
                Finding(
                    kind=FindingKind.ORDER_REVERSAL,
                    severity=Severity.WARNING,
                    studies=(si.label, sj.label),
                    detail=(
                        f"equal proportions, unequal theta: "
                        f"{si.label} theta={ti:.6g}, {sj.label} theta={tj:.6g} "
                        f"(p={si.proportion:.6g})"
                    ),
                )
            )
    return findings


def check_preimage(
    theta: float,
    n: float,
    kind: TransformKind,
    severity: Severity = Severity.WARNING,
) -> Optional[Finding]:
    """Report when a transformed value has no preimage for sample size n."""
    if n <= 0:
        raise ValueError(f"sample size must be positive, got {n}")
    rng = theta_range(kind, max(1.0, n))
    if rng.contains(theta):
        return None
    return Finding(
        kind=FindingKind.NO_PREIMAGE,
        severity=severity,
        studies=(),
        detail=(
            f"theta={theta:.6g} outside attainable range "
            f"[{rng.lo:.6g}, {rng.hi:.6g}] for N={n:.6g}"
        ),
    )


def check_pooled_between(
    p_hat: float, studies: Sequence[StudyRecord]
) -> Optional[Finding]:
    """Report when the back-transformed pooled proportion leaves the observed range."""
    if not studies:
        raise ValueError("check_pooled_between requires at least one study")
    lo_study = min(studies, key=lambda s: s.proportion)
    hi_study = max(studies, key=lambda s: s.proportion)
    if lo_study.proportion <= p_hat <= hi_study.proportion:
        return None
    side = "below min" if p_hat < lo_study.proportion else "above max"
    return Finding(
        kind=FindingKind.POOLED_OUTSIDE_OBSERVED_RANGE,
        severity=Severity.WARNING,
        studies=tuple(sorted({lo_study.label, hi_study.label})),
        detail=(
            f"pooled p={p_hat:.6g} {side} of observed proportions "
            f"[{lo_study.proportion:.6g}, {hi_study.proportion:.6g}]"
        ),
    )


def overlap_report(
    studies: Sequence[StudyRecord], kind: TransformKind
) -> Optional[Finding]:
    """Report when the studies' attainable theta ranges only partly overlap."""
    if len(studies) < 2:
        raise ValueError("overlap report requires at least two studies")
    if kind is TransformKind.SINGLE_ARCSINE:
        return None
    ranges = {s.total: theta_range(kind, s.total) for s in studies}
    common_lo = max(r.lo for r in ranges.values())
    common_hi = min(r.hi for r in ranges.values())
    ranges_differ = any(
        common_lo > r.lo or common_hi < r.hi for r in ranges.values()
    )
    if not ranges_differ:
        return None
    per_study = ", ".join(
        f"N={n}: [{r.lo:.6g}, {r.hi:.6g}]" for n, r in sorted(ranges.items())
    )
    return Finding(
        kind=FindingKind.PARTIAL_IMAGE_OVERLAP,
        severity=Severity.WARNING,
        studies=tuple(sorted(s.label for s in studies)),
        detail=(
            f"theta ranges only partly overlap; common intersection "
            f"[{common_lo:.6g}, {common_hi:.6g}]; {per_study}"
        ),
    )

"""Arcsine-family transforms for binomial proportions.

Provides the single arcsine transform arcsin(sqrt(p)) and the double
(Freeman-Tukey) arcsine transform, together with their approximate sampling
variances and attainable value ranges. The double arcsine uses the
half-scaled convention

    theta = (1/2) * (arcsin(sqrt(a/(N+1))) + arcsin(sqrt((a+1)/(N+1))))

and all downstream variance and inversion code assumes the same scaling.
All angles are in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "TransformKind",
    "StudyRecord",
    "TransformedStudy",
    "ThetaRange",
    "double_arcsine",
    "single_arcsine",
    "continuous_forward",
    "approx_variance",
    "theta_range",
    "transform_study",
]

# Tolerated floating-point excess before clamping an arcsin argument to [0, 1].
_CLAMP_GUARD = 1e-12


class TransformKind(Enum):
    """Which arcsine-family transform is in use."""

    SINGLE_ARCSINE = "single"
    DOUBLE_ARCSINE = "double"


@dataclass(frozen=True)
class StudyRecord:
    """One study's event count and sample size.

    Attributes
    ----------
    label : str
        Text identifier for the study.
    events : int
        Number of observed events, 0 <= events <= total.
    total : int
        Sample size, >= 1.
    """

    label: str
    events: int
    total: int

    def __post_init__(self) -> None:
        if self.total < 1:
            raise ValueError(f"study {self.label!r}: total must be >= 1, got {self.total}")
        if not 0 <= self.events <= self.total:
            raise ValueError(
                f"study {self.label!r}: events must be in [0, total], "
                f"got events={self.events}, total={self.total}"
            )

    @property
    def proportion(self) -> float:
        """Observed proportion events/total."""
        return self.events / self.total


@dataclass(frozen=True)
class TransformedStudy:
    """A study mapped onto a transformed scale."""

    theta: float
    variance: float
    source_total: int
    kind: TransformKind
    label: str

    def __post_init__(self) -> None:
        if self.variance <= 0:
            raise ValueError(f"study {self.label!r}: variance must be > 0")


@dataclass(frozen=True)
class ThetaRange:
    """Attainable interval of transformed values, inclusive at both ends."""

    lo: float
    hi: float

    def contains(self, theta: float) -> bool:
        return self.lo <= theta <= self.hi


def _asin_sqrt(x: float) -> float:
    """arcsin(sqrt(x)) with a guarded clamp of x into [0, 1].

    Arguments may stray outside [0, 1] by rounding error only; an excess
    beyond the guard threshold indicates a caller bug and raises.
    """
    if x < 0.0:
        if x < -_CLAMP_GUARD:
            raise ValueError(f"arcsin argument {x} below 0 beyond rounding tolerance")
        x = 0.0
    elif x > 1.0:
        if x > 1.0 + _CLAMP_GUARD:
            raise ValueError(f"arcsin argument {x} above 1 beyond rounding tolerance")
        x = 1.0
    return math.asin(math.sqrt(x))


def _check_counts(a: int, n: int) -> None:
    if n <= 0:
        raise ValueError(f"sample size must be positive, got {n}")
    if not 0 <= a <= n:
        raise ValueError(f"event count must be in [0, {n}], got {a}")


def double_arcsine(a: int, n: int) -> float:
    """Freeman-Tukey double arcsine transform of a events in n trials.

    Returns (1/2)*(arcsin(sqrt(a/(n+1))) + arcsin(sqrt((a+1)/(n+1)))),
    in radians. Depends on a and n separately, not only on p = a/n.
    """
    _check_counts(a, n)
    return 0.5 * (_asin_sqrt(a / (n + 1)) + _asin_sqrt((a + 1) / (n + 1)))


def single_arcsine(a: int, n: int) -> float:
    """Single arcsine transform arcsin(sqrt(a/n)), in radians."""
    _check_counts(a, n)
    return _asin_sqrt(a / n)


def continuous_forward(p: float, n: float) -> float:
    """Double arcsine transform extended to real-valued proportions.

    Substitutes a = p*n into the double arcsine formula. Strictly increasing
    in p for fixed n, and agrees with ``double_arcsine(a, n)`` whenever
    p = a/n exactly. The sample size may be fractional; this is what makes
    inverse-variance implied sample sizes usable without rounding.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"proportion must be in [0, 1], got {p}")
    if n <= 0:
        raise ValueError(f"sample size must be positive, got {n}")
    a = p * n
    return 0.5 * (_asin_sqrt(a / (n + 1)) + _asin_sqrt((a + 1) / (n + 1)))


def approx_variance(kind: TransformKind, n: float) -> float:
    """Approximate sampling variance of the transformed value.

    1/(4n+2) for the (half-scaled) double arcsine, 1/(4n) for the single
    arcsine. Both are independent of the underlying probability, which is
    the point of variance stabilization.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if kind is TransformKind.DOUBLE_ARCSINE:
        return 1.0 / (4.0 * n + 2.0)
    return 1.0 / (4.0 * n)


def theta_range(kind: TransformKind, n: float) -> ThetaRange:
    """Attainable range of transformed values for sample size n.

    The single arcsine always maps onto [0, pi/2]. The double arcsine maps
    onto a strict sub-interval that depends on n, which is why values from
    studies with different sample sizes live on different scales.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if kind is TransformKind.SINGLE_ARCSINE:
        return ThetaRange(0.0, math.pi / 2.0)
    return ThetaRange(continuous_forward(0.0, n), continuous_forward(1.0, n))


def transform_study(study: StudyRecord, kind: TransformKind) -> TransformedStudy:
    """Map a study onto the requested transformed scale."""
    if kind is TransformKind.DOUBLE_ARCSINE:
        theta = double_arcsine(study.events, study.total)
    else:
        theta = single_arcsine(study.events, study.total)
    return TransformedStudy(
        theta=theta,
        variance=approx_variance(kind, study.total),
        source_total=study.total,
        kind=kind,
        label=study.label,
    )

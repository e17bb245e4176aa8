"""Inverse-variance pooling of transformed studies.

Fixed-effect pooling is the default; DerSimonian-Laird random effects is
available as an opt-in. Confidence intervals are normal-approximation
intervals on the transformed scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.special import ndtri

from .transforms import TransformedStudy

__all__ = ["PooledResult", "z_quantile", "pool_fixed", "pool_random_dl"]

# Documented constants for common confidence levels; arbitrary levels fall
# back to the inverse normal CDF.
_Z_TABLE = {0.90: 1.644854, 0.95: 1.959964, 0.99: 2.575829}


@dataclass(frozen=True)
class PooledResult:
    """Pooled estimate on the transformed scale."""

    theta_hat: float
    se: float
    ci_lo: float
    ci_hi: float
    weights: tuple[float, ...]
    model: str  # "fixed" | "dl"
    tau2: float
    level: float

    def __post_init__(self) -> None:
        if self.se > 0 and not self.ci_lo < self.theta_hat < self.ci_hi:
            raise ValueError("confidence interval must strictly bracket the estimate")
        total_weight = sum(self.weights)
        if not (total_weight > 0 and math.isfinite(total_weight)):
            raise ValueError("weights must sum to a positive finite value")


def z_quantile(level: float) -> float:
    """Two-sided normal quantile for the given confidence level."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must be in (0, 1), got {level}")
    z = _Z_TABLE.get(round(level, 10))
    if z is None:
        z = float(ndtri(0.5 + level / 2.0))
    return z


def _check_studies(studies: Sequence[TransformedStudy]) -> None:
    if not studies:
        raise ValueError("pooling requires at least one study")
    kinds = {s.kind for s in studies}
    if len(kinds) > 1:
        raise ValueError("cannot pool studies on different transformed scales")
    for s in studies:
        if s.variance <= 0:
            raise ValueError(f"study {s.label!r} has non-positive variance")


def _pool(thetas, variances, level, model, tau2):
    weights = [1.0 / (v + tau2) for v in variances]
    total = sum(weights)
    theta_hat = sum(w * t for w, t in zip(weights, thetas)) / total
    se = math.sqrt(1.0 / total)
    z = z_quantile(level)
    return PooledResult(
        theta_hat=theta_hat,
        se=se,
        ci_lo=theta_hat - z * se,
        ci_hi=theta_hat + z * se,
        weights=tuple(weights),
        model=model,
        tau2=tau2,
        level=level,
    )


def pool_fixed(studies: Sequence[TransformedStudy], level: float = 0.95) -> PooledResult:
    """Fixed-effect inverse-variance pooling.

    Weights are the reciprocal sampling variances; the pooled standard error
    is sqrt(1 / sum of weights).
    """
    _check_studies(studies)
    z_quantile(level)  # validate early
    return _pool([s.theta for s in studies], [s.variance for s in studies], level, "fixed", 0.0)


def pool_random_dl(studies: Sequence[TransformedStudy], level: float = 0.95) -> PooledResult:
    """DerSimonian-Laird random-effects pooling.

    Estimates the between-study variance tau^2 by the moment method from the
    fixed-effect Q statistic, then re-pools with weights 1/(v_i + tau^2).
    """
    _check_studies(studies)
    if len(studies) < 2:
        raise ValueError("random-effects pooling requires at least two studies")
    thetas = [s.theta for s in studies]
    variances = [s.variance for s in studies]
    fixed = _pool(thetas, variances, level, "fixed", 0.0)
    w = fixed.weights
    q = sum(wi * (t - fixed.theta_hat) ** 2 for wi, t in zip(w, thetas))
    sw = sum(w)
    denom = sw - sum(wi * wi for wi in w) / sw
    k = len(studies)
    tau2 = max(0.0, (q - (k - 1)) / denom) if denom > 0 else 0.0
    return _pool(thetas, variances, level, "dl", tau2)

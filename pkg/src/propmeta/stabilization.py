"""Exact quantification of variance stabilization.

Computes the exact sampling variance of a transform under a Binomial(N, p)
model by full enumeration over a = 0..N, and compares it against the
constant approximate variance the transform advertises. The ratio
exact/target over a grid of p values shows how well each transform
stabilizes variance; the double arcsine's ratios stay closer to 1 than the
single arcsine's, which is the transform's one genuine advantage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .transforms import TransformKind, approx_variance, double_arcsine, single_arcsine

__all__ = [
    "VariancePoint",
    "exact_variance",
    "variance_curve",
    "DEFAULT_P_GRID",
    "DEFAULT_N_SET",
]

DEFAULT_P_GRID = tuple(round(0.01 * i, 2) for i in range(1, 100))
DEFAULT_N_SET = (10, 20, 50, 100, 500, 1000)


@dataclass(frozen=True)
class VariancePoint:
    """Exact transform variance at one (p, N), with its stabilization target."""

    p: float
    n: int
    exact_variance: float
    target: float
    ratio: float


def _log_pmf(n: int, p: float) -> np.ndarray:
    """log Binomial(n, p) pmf over a = 0..n; p strictly inside (0, 1)."""
    a = np.arange(n + 1)
    return (
        gammaln(n + 1)
        - gammaln(a + 1)
        - gammaln(n - a + 1)
        + a * math.log(p)
        + (n - a) * math.log1p(-p)
    )


def exact_variance(kind: TransformKind, n: int, p: float) -> float:
    """Var[T(A, n)] for A ~ Binomial(n, p), by full enumeration.

    The pmf is evaluated in log space to stay finite at large n, and the
    first two moments are accumulated with compensated summation. Degenerate
    distributions (p = 0 or 1) have zero variance.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    transform = double_arcsine if kind is TransformKind.DOUBLE_ARCSINE else single_arcsine
    weights = np.exp(_log_pmf(n, p))
    thetas = [transform(a, n) for a in range(n + 1)]
    mean = math.fsum(w * t for w, t in zip(weights, thetas))
    return math.fsum(w * (t - mean) ** 2 for w, t in zip(weights, thetas))


def variance_curve(
    kind: TransformKind, n: int, p_grid: Sequence[float]
) -> list[VariancePoint]:
    """Exact-variance points over a grid of true probabilities."""
    target = approx_variance(kind, n)
    return [
        VariancePoint(
            p=p,
            n=n,
            exact_variance=(ev := exact_variance(kind, n, p)),
            target=target,
            ratio=ev / target,
        )
        for p in p_grid
    ]

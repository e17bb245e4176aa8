"""Back-transformation from the arcsine scales to the proportion scale.

Inverting the double arcsine requires choosing a sample size N, since the
forward transform depends on N. Three conventions are supported: the
harmonic mean of the study sample sizes, the N whose approximate variance
equals the pooled variance (inverse-variance convention), or an explicit
user-supplied value.

The reference inverse is numeric bisection on the strictly monotone
continuous forward transform. Miller's closed-form inverse is kept as a
cross-check only and is validated against bisection before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .transforms import StudyRecord, TransformKind, continuous_forward, theta_range

__all__ = [
    "BackTransformConvention",
    "BackTransformResult",
    "implied_sample_size",
    "invert_double_arcsine",
    "invert_single_arcsine",
    "miller_closed_form",
]

_BISECT_TOL = 1e-13
_BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class BackTransformConvention:
    """How to choose the sample size used for back-transformation."""

    method: str  # "harmonic" | "invvar" | "explicit"
    explicit_n: Optional[float] = None

    def __post_init__(self) -> None:
        if self.method not in ("harmonic", "invvar", "explicit"):
            raise ValueError(f"unknown back-transform convention {self.method!r}")
        if self.method == "explicit":
            if self.explicit_n is None or self.explicit_n <= 0:
                raise ValueError("explicit convention requires a positive sample size")
        elif self.explicit_n is not None:
            raise ValueError(f"convention {self.method!r} does not take an explicit N")

    @classmethod
    def harmonic_mean(cls) -> "BackTransformConvention":
        return cls("harmonic")

    @classmethod
    def inverse_variance(cls) -> "BackTransformConvention":
        return cls("invvar")

    @classmethod
    def explicit(cls, n: float) -> "BackTransformConvention":
        return cls("explicit", explicit_n=n)


@dataclass(frozen=True)
class BackTransformResult:
    """A back-transformed point estimate and confidence interval.

    The clamp flags record whether the corresponding transformed value fell
    outside the attainable range for the implied sample size; clamped values
    are pragmatically mapped to 0 or 1, never silently.
    """

    p_hat: float
    ci_lo: float
    ci_hi: float
    implied_n: float
    clamped_point: bool
    clamped_lo: bool
    clamped_hi: bool

    def __post_init__(self) -> None:
        if not 0.0 <= self.ci_lo <= self.p_hat <= self.ci_hi <= 1.0:
            raise ValueError(
                f"interval ordering violated: {self.ci_lo}, {self.p_hat}, {self.ci_hi}"
            )


def implied_sample_size(
    studies: Sequence[StudyRecord],
    convention: BackTransformConvention,
    pooled_variance: Optional[float] = None,
) -> float:
    """Sample size to use when inverting the double arcsine.

    Harmonic mean: k / sum(1/N_i). Inverse variance: the N at which the
    double arcsine's approximate variance 1/(4N+2) equals the pooled
    variance, i.e. N = (1/v - 2)/4, floored at 1; may be fractional and is
    used as-is. Explicit: the supplied value.
    """
    if not studies:
        raise ValueError("implied_sample_size requires at least one study")
    if convention.method == "harmonic":
        return len(studies) / sum(1.0 / s.total for s in studies)
    if convention.method == "invvar":
        if pooled_variance is None or pooled_variance <= 0:
            raise ValueError("inverse-variance convention requires a positive pooled variance")
        return max(1.0, (1.0 / pooled_variance - 2.0) / 4.0)
    assert convention.explicit_n is not None
    return convention.explicit_n


def invert_double_arcsine(theta: float, n: float) -> tuple[float, bool]:
    """Invert the double arcsine for sample size n.

    Returns ``(p, clamped)``. Inside the attainable range the unique
    preimage is found by bisection (|dp| <= 1e-12). A theta below the range
    maps to (0, True), above it to (1, True); the range boundaries
    themselves are not clamped.
    """
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    if n <= 0:
        raise ValueError(f"sample size must be positive, got {n}")
    rng = theta_range(TransformKind.DOUBLE_ARCSINE, max(1.0, n))
    if theta < rng.lo:
        return 0.0, True
    if theta > rng.hi:
        return 1.0, True
    lo, hi = 0.0, 1.0
    for _ in range(_BISECT_MAX_ITER):
        if hi - lo <= _BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        if continuous_forward(mid, n) < theta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), False


def invert_single_arcsine(theta: float) -> float:
    """Analytic inverse of the single arcsine: sin^2(theta)."""
    if not 0.0 <= theta <= math.pi / 2.0:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    return math.sin(theta) ** 2


def miller_closed_form(theta: float, n: float) -> float:
    """Closed-form inverse of the double arcsine (cross-check only).

    With phi = 2*theta:

        p = (1/2) * (1 - sgn(cos phi) * sqrt(1 - (sin phi + (sin phi - 1/sin phi)/n)^2))

    Must agree with the bisection inverse to 1e-6; callers treat a larger
    discrepancy as failed validation and defer to bisection.
    """
    if n <= 0:
        raise ValueError(f"sample size must be positive, got {n}")
    rng = theta_range(TransformKind.DOUBLE_ARCSINE, max(1.0, n))
    if not rng.contains(theta):
        raise ValueError(f"theta {theta} outside attainable range [{rng.lo}, {rng.hi}]")
    phi = 2.0 * theta
    s = math.sin(phi)
    if s == 0.0:
        raise ValueError("closed-form inverse undefined at sin(2*theta) = 0")
    c = math.cos(phi)
    inner = s + (s - 1.0 / s) / n
    radicand = 1.0 - inner * inner
    if radicand < 0.0:
        # rounding at the range boundaries can push the radicand slightly negative
        if radicand < -1e-12:
            raise ValueError(f"closed-form radicand {radicand} negative beyond tolerance")
        radicand = 0.0
    p = 0.5 * (1.0 - math.copysign(1.0, c) * math.sqrt(radicand))
    return min(1.0, max(0.0, p))

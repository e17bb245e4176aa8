import math

import pytest

from propmeta import (
    TransformKind,
    TransformedStudy,
    double_arcsine,
    pool_fixed,
    pool_random_dl,
    z_quantile,
)

DOUBLE = TransformKind.DOUBLE_ARCSINE


def _ts(theta, variance, label="s", n=100, kind=DOUBLE):
    return TransformedStudy(
        theta=theta, variance=variance, source_total=n, kind=kind, label=label
    )


class TestZQuantile:
    def test_documented_constants(self):
        assert z_quantile(0.95) == 1.959964
        assert z_quantile(0.90) == 1.644854
        assert z_quantile(0.99) == 2.575829

    def test_arbitrary_level(self):
        # oracle: scipy.stats.norm.ppf(0.9), independent of the table path
        assert z_quantile(0.80) == pytest.approx(1.2815515655446004, rel=1e-9)

    def test_rejects_bad_level(self):
        for level in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError):
                z_quantile(level)


class TestPoolFixed:
    def test_schwarzer_pair(self):
        t10 = double_arcsine(32, 16557)
        t13 = double_arcsine(1, 676)
        res = pool_fixed([_ts(t10, 1 / 66230, "s10"), _ts(t13, 1 / 2706, "s13")])
        assert res.theta_hat == pytest.approx(0.04440, abs=5e-5)
        assert 1 / res.se**2 == pytest.approx(68936.0, rel=1e-12)
        assert res.model == "fixed"
        assert res.tau2 == 0.0

    def test_single_study_identity(self):
        res = pool_fixed([_ts(0.42, 0.004)])
        assert res.theta_hat == 0.42
        assert res.se == pytest.approx(math.sqrt(0.004), rel=1e-15)

    def test_identical_studies(self):
        k = 7
        res = pool_fixed([_ts(0.3, 0.01, f"s{i}") for i in range(k)])
        assert res.theta_hat == pytest.approx(0.3, abs=1e-15)
        assert res.se == pytest.approx(math.sqrt(0.01 / k), rel=1e-12)

    def test_convexity(self):
        thetas = [0.1, 0.5, 0.35, 0.2]
        res = pool_fixed([_ts(t, 0.001 * (i + 1), f"s{i}") for i, t in enumerate(thetas)])
        assert min(thetas) <= res.theta_hat <= max(thetas)

    def test_variance_scale_invariance(self):
        studies = [_ts(0.2, 0.003, "a"), _ts(0.5, 0.007, "b")]
        scaled = [_ts(s.theta, 10 * s.variance, s.label) for s in studies]
        r1, r2 = pool_fixed(studies), pool_fixed(scaled)
        assert r2.theta_hat == pytest.approx(r1.theta_hat, rel=1e-12)
        assert r2.se == pytest.approx(math.sqrt(10) * r1.se, rel=1e-12)

    def test_ci_width(self):
        res = pool_fixed([_ts(0.3, 0.01)], level=0.95)
        assert res.ci_hi - res.ci_lo == pytest.approx(2 * 1.959964 * res.se, rel=1e-12)

    def test_rejects_mixed_kinds(self):
        with pytest.raises(ValueError):
            pool_fixed(
                [_ts(0.3, 0.01), _ts(0.3, 0.01, kind=TransformKind.SINGLE_ARCSINE)]
            )

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            pool_fixed([])


class TestPoolRandomDL:
    def test_identical_studies_reduce_to_fixed(self):
        studies = [_ts(0.3, 0.01, f"s{i}") for i in range(5)]
        dl = pool_random_dl(studies)
        fe = pool_fixed(studies)
        assert dl.tau2 == 0.0
        assert dl.theta_hat == pytest.approx(fe.theta_hat, abs=1e-15)
        assert dl.se == pytest.approx(fe.se, rel=1e-12)

    def test_two_equal_variance_studies(self):
        # hand-check of the moment estimator at k=2, equal variances v:
        # Q = (t1-t2)^2/(2v), denom = 2/v - (2/v^2)/(2/v) = 1/v,
        # tau2 = max(0, Q-1)*v
        v, t1, t2 = 0.01, 0.2, 0.5
        res = pool_random_dl([_ts(t1, v, "a"), _ts(t2, v, "b")])
        q = (t1 - t2) ** 2 / (2 * v)
        expected_tau2 = max(0.0, (q - 1) * v)
        assert res.tau2 == pytest.approx(expected_tau2, rel=1e-12)
        assert res.theta_hat == pytest.approx((t1 + t2) / 2, rel=1e-12)

    def test_four_study_near_equal_thetas(self, four_tenths):
        from propmeta import transform_study

        transformed = [transform_study(s, DOUBLE) for s in four_tenths]
        dl = pool_random_dl(transformed)
        fe = pool_fixed(transformed)
        assert dl.tau2 == 0.0  # Q < k-1 for these data
        assert dl.theta_hat == pytest.approx(fe.theta_hat, abs=1e-15)

    def test_requires_two_studies(self):
        with pytest.raises(ValueError):
            pool_random_dl([_ts(0.3, 0.01)])

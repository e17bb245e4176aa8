import random

import pytest

from propmeta import (
    FindingKind,
    Severity,
    StudyRecord,
    TransformKind,
    check_pooled_between,
    check_preimage,
    continuous_forward,
    detect_order_reversals,
    double_arcsine,
    overlap_report,
    single_arcsine,
)

DOUBLE = TransformKind.DOUBLE_ARCSINE
SINGLE = TransformKind.SINGLE_ARCSINE


class TestOrderReversals:
    def test_schwarzer_pair_double(self, schwarzer_pair):
        findings = detect_order_reversals(schwarzer_pair, DOUBLE)
        assert len(findings) == 1
        f = findings[0]
        assert f.kind is FindingKind.ORDER_REVERSAL
        assert set(f.studies) == {"study 10", "study 13"}

    def test_schwarzer_pair_single(self, schwarzer_pair):
        assert detect_order_reversals(schwarzer_pair, SINGLE) == []

    def test_equal_p_unequal_theta(self, four_tenths):
        findings = detect_order_reversals(four_tenths, DOUBLE)
        assert len(findings) == 6  # every pair
        assert all("equal proportions" in f.detail for f in findings)
        assert all(f.severity is Severity.WARNING for f in findings)

    def test_equal_p_single_arcsine_clean(self, four_tenths):
        assert detect_order_reversals(four_tenths, SINGLE) == []

    def test_requires_two_studies(self):
        with pytest.raises(ValueError):
            detect_order_reversals([StudyRecord("s", 1, 2)], DOUBLE)

    def test_soundness(self, schwarzer_pair):
        by_label = {s.label: s for s in schwarzer_pair}
        for f in detect_order_reversals(schwarzer_pair, DOUBLE):
            si, sj = (by_label[lbl] for lbl in f.studies)
            dp = si.events * sj.total - sj.events * si.total
            dt = double_arcsine(si.events, si.total) - double_arcsine(sj.events, sj.total)
            assert dp * dt < 0

    def test_completeness_against_independent_scan(self):
        # independent pairwise re-scan over a random pool must agree exactly
        rng = random.Random(20220304)
        studies = []
        for i in range(200):
            total = rng.randint(1, 10**4)
            studies.append(StudyRecord(f"s{i:03d}", rng.randint(0, total), total))
        reported = {
            frozenset(f.studies)
            for f in detect_order_reversals(studies, DOUBLE)
            if "equal proportions" not in f.detail
        }
        expected = set()
        thetas = {s.label: double_arcsine(s.events, s.total) for s in studies}
        for i in range(len(studies)):
            for j in range(i + 1, len(studies)):
                si, sj = studies[i], studies[j]
                dp = si.events / si.total - sj.events / sj.total
                dt = thetas[si.label] - thetas[sj.label]
                if dp * dt < 0 and si.events * sj.total != sj.events * si.total:
                    expected.add(frozenset((si.label, sj.label)))
        assert reported == expected
        assert expected  # the pool is large enough that reversals occur

    def test_deterministic_order(self, four_tenths):
        pairs = [f.studies for f in detect_order_reversals(four_tenths, DOUBLE)]
        assert pairs == sorted(pairs)


class TestPreimage:
    def test_paper_value_double(self):
        f = check_preimage(0.015, 676, DOUBLE)
        assert f is not None
        assert f.kind is FindingKind.NO_PREIMAGE

    def test_paper_value_single(self):
        assert check_preimage(0.015, 676, SINGLE) is None

    def test_image_point(self):
        assert check_preimage(continuous_forward(0.5, 100), 100, DOUBLE) is None

    def test_severity_override(self):
        f = check_preimage(0.015, 676, DOUBLE, severity=Severity.ERROR)
        assert f.severity is Severity.ERROR


class TestPooledBetween:
    def test_paper_case_fires(self, schwarzer_pair):
        f = check_pooled_between(0.00194, schwarzer_pair)
        assert f is not None
        assert f.kind is FindingKind.POOLED_OUTSIDE_OBSERVED_RANGE
        assert "above max" in f.detail

    def test_inside_range(self, schwarzer_pair):
        assert check_pooled_between(0.0018, schwarzer_pair) is None

    def test_boundary_inclusive(self, schwarzer_pair):
        assert check_pooled_between(1 / 676, schwarzer_pair) is None
        assert check_pooled_between(32 / 16557, schwarzer_pair) is None

    def test_below_min(self, schwarzer_pair):
        f = check_pooled_between(0.0001, schwarzer_pair)
        assert f is not None
        assert "below min" in f.detail

    def test_requires_studies(self):
        with pytest.raises(ValueError):
            check_pooled_between(0.5, [])


class TestOverlapReport:
    def test_differing_n(self):
        studies = [StudyRecord("a", 1, 10), StudyRecord("b", 5, 10000)]
        f = overlap_report(studies, DOUBLE)
        assert f is not None
        assert f.kind is FindingKind.PARTIAL_IMAGE_OVERLAP

    def test_equal_n(self):
        studies = [StudyRecord("a", 1, 50), StudyRecord("b", 5, 50)]
        assert overlap_report(studies, DOUBLE) is None

    def test_single_arcsine(self):
        studies = [StudyRecord("a", 1, 10), StudyRecord("b", 5, 10000)]
        assert overlap_report(studies, SINGLE) is None


class TestSingleArcsineCleanliness:
    def test_random_pool_produces_no_findings(self):
        rng = random.Random(7)
        studies = []
        for i in range(100):
            total = rng.randint(1, 5000)
            studies.append(StudyRecord(f"s{i}", rng.randint(0, total), total))
        assert detect_order_reversals(studies, SINGLE) == []
        assert overlap_report(studies, SINGLE) is None
        for s in studies:
            theta = single_arcsine(s.events, s.total)
            assert check_preimage(theta, s.total, SINGLE) is None

from __future__ import annotations

import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from reductionlab.classifiers import (
    FALLBACK_LABEL,
    REJECT,
    build_lookup_classifier,
    build_lookup_detector,
    build_tiny_mlp,
)
from reductionlab.errors import DomainError, ModelError
from reductionlab.geometry import L1, LINF, GridDomain, ScaledDistance, iter_ball, metric_from_tag
from reductionlab.reductions import (
    CertStatus,
    FallbackPolicy,
    ReductionConfig,
    certification_rate,
    certified_detector,
    classifier_to_detector,
    detector_to_classifier,
    ibp_certify,
)
from reductionlab.risk import risk, robust_risk_det_exact, robust_risk_exact
from reductionlab.tasks import gen_random_classifier_instance, gen_random_instance, random_tiny_mlp

LINE = GridDomain.box(1, 0, 4)
TEN = GridDomain.box(1, 0, 10)


def config(domain, eps, metric=LINF, **kwargs):
    return ReductionConfig(metric=metric, eps=ScaledDistance.of(eps), domain=domain, **kwargs)


class ReductionConfigTest(unittest.TestCase):
    def test_half_radius(self) -> None:
        self.assertEqual(config(LINE, 3).half_radius, ScaledDistance(Fraction(3, 2)))

    def test_dict_form(self) -> None:
        cfg = config(LINE, "8/255", metric=L1(), fallback_seed=4, fallback_policy="seeded-random")
        restored = ReductionConfig.from_dict(cfg.to_dict())
        self.assertEqual(restored, cfg)
        self.assertIs(restored.fallback_policy, FallbackPolicy.SEEDED_RANDOM)

    def test_budget_must_be_positive(self) -> None:
        with self.assertRaises(ValueError):
            config(LINE, 2, budget=0)


class DetectorToClassifierTest(unittest.TestCase):
    def test_detector_without_rejections_is_unchanged(self) -> None:
        det = build_lookup_detector(LINE, [0, 1, 1, 0, 1])
        clf = detector_to_classifier(det, config(LINE, 2))
        self.assertEqual([clf.classify(p) for p in LINE.points()], [0, 1, 1, 0, 1])

    def test_rejected_point_decodes_to_the_nearest_accepted_label(self) -> None:
        det = build_lookup_detector(LINE, [0, None, None, None, 1])
        clf = detector_to_classifier(det, config(LINE, 2))
        # the radius-1 ball around 1 is scanned as 1, 0, 2
        self.assertEqual(clf.classify((1,)), 0)
        self.assertEqual(clf.classify((3,)), 1)
        self.assertEqual(clf.classify((2,)), FALLBACK_LABEL)

    def test_rejecting_everywhere_falls_back_everywhere(self) -> None:
        det = build_lookup_detector(LINE, [None] * 5, num_classes=2)
        clf = detector_to_classifier(det, config(LINE, 2))
        self.assertEqual({clf.classify(p) for p in LINE.points()}, {FALLBACK_LABEL})

    def test_seeded_fallback_is_a_deterministic_valid_label(self) -> None:
        domain = GridDomain.box(2, 0, 5)
        det = build_lookup_detector(domain, [None] * domain.size, num_classes=3)
        cfg = config(domain, 2, fallback_policy=FallbackPolicy.SEEDED_RANDOM, fallback_seed=9)
        first = detector_to_classifier(det, cfg)
        second = detector_to_classifier(det, cfg)
        labels = [first.classify(p) for p in domain.points()]
        self.assertEqual(labels, [second.classify(p) for p in domain.points()])
        self.assertTrue(all(0 <= y < 3 for y in labels))
        self.assertGreater(len(set(labels)), 1)

    def test_memoized_table_matches_lazy_queries(self) -> None:
        domain = GridDomain.box(2, 0, 6)
        _, det = gen_random_instance(13, domain, 3, Fraction(1, 2), 4)
        lazy = detector_to_classifier(det, config(domain, 2))
        table = detector_to_classifier(det, config(domain, 2, memoize=True))
        for point in domain.points():
            self.assertEqual(lazy.classify(point), table.classify(point))

    def test_config_domain_must_match(self) -> None:
        with self.assertRaises(DomainError):
            detector_to_classifier(build_lookup_detector(LINE, [0] * 5), config(TEN, 2))

    @settings(derandomize=True, deadline=None, max_examples=40)
    @given(
        seed=st.integers(min_value=0, max_value=10**6),
        half=st.integers(min_value=0, max_value=2),
        tag=st.sampled_from(["linf", "l1"]),
        reject_rate=st.sampled_from([Fraction(1, 10), Fraction(3, 10), Fraction(1, 2)]),
    )
    def test_robust_classifier_risk_is_bounded_by_the_detector(self, seed, half, tag, reject_rate) -> None:
        metric = metric_from_tag(tag)
        domain = GridDomain.box(2, 0, 7)
        eps = 2 * half
        data, det = gen_random_instance(seed, domain, 3, reject_rate, 8, metric)
        clf = detector_to_classifier(det, config(domain, eps, metric, memoize=True))
        bound = robust_risk_det_exact(det, data, metric, eps)
        self.assertLessEqual(risk(clf, data), bound)
        self.assertLessEqual(robust_risk_exact(clf, data, metric, half), bound)


class ClassifierToDetectorTest(unittest.TestCase):
    def setUp(self) -> None:
        self.threshold = build_lookup_classifier(TEN, [0 if x < 5 else 1 for x in range(11)])

    def test_constant_classifier_never_rejects(self) -> None:
        det = classifier_to_detector(build_lookup_classifier(TEN, [1] * 11), config(TEN, 4))
        self.assertEqual({det.classify_or_reject(p) for p in TEN.points()}, {1})

    def test_label_flip_in_the_ball_rejects(self) -> None:
        det = classifier_to_detector(self.threshold, config(TEN, 2))
        self.assertIs(det.classify_or_reject((4,)), REJECT)
        self.assertEqual(det.classify_or_reject((3,)), 0)
        self.assertEqual(det.classify_or_reject((6,)), 1)

    def test_zero_radius_never_rejects(self) -> None:
        det = classifier_to_detector(self.threshold, config(TEN, 0))
        for point in TEN.points():
            self.assertEqual(det.classify_or_reject(point), self.threshold.classify(point))

    @settings(derandomize=True, deadline=None, max_examples=40)
    @given(
        seed=st.integers(min_value=0, max_value=10**6),
        half=st.integers(min_value=0, max_value=2),
        tag=st.sampled_from(["linf", "l1"]),
        classes=st.sampled_from([2, 3, 10]),
    )
    def test_detector_risks_are_bounded_by_the_classifier(self, seed, half, tag, classes) -> None:
        metric = metric_from_tag(tag)
        domain = GridDomain.box(2, 0, 7)
        data, clf = gen_random_classifier_instance(seed, domain, classes, 8, metric)
        det = classifier_to_detector(clf, config(domain, 2 * half, metric, memoize=True))
        bound = robust_risk_exact(clf, data, metric, half)
        self.assertLessEqual(risk(det, data), bound)
        self.assertLessEqual(robust_risk_det_exact(det, data, metric, 2 * half), bound)


class RoundTripTest(unittest.TestCase):
    def test_threshold_classifier_comes_back_unchanged(self) -> None:
        threshold = build_lookup_classifier(TEN, [0] * 5 + [1] * 6)
        cfg = config(TEN, 2)
        rebuilt = detector_to_classifier(classifier_to_detector(threshold, cfg), cfg)
        # 4 and 5 are rejected on the way and decoded from 3 and 6
        self.assertEqual([rebuilt.classify(p) for p in TEN.points()], [threshold.classify(p) for p in TEN.points()])

    @settings(derandomize=True, deadline=None, max_examples=60)
    @given(
        seed=st.integers(min_value=0, max_value=10**6),
        half=st.integers(min_value=1, max_value=2),
        tag=st.sampled_from(["linf", "l1"]),
        classes=st.sampled_from([2, 3, 10]),
    )
    def test_quarter_radius_risk_is_bounded_by_the_original(self, seed, half, tag, classes) -> None:
        metric = metric_from_tag(tag)
        domain = GridDomain.box(2, 0, 6)
        data, clf = gen_random_classifier_instance(seed, domain, classes, 8, metric)
        cfg = config(domain, 2 * half, metric, memoize=True)
        rebuilt = detector_to_classifier(classifier_to_detector(clf, cfg), cfg)
        bound = robust_risk_exact(clf, data, metric, half)
        self.assertLessEqual(robust_risk_exact(rebuilt, data, metric, Fraction(half, 2)), bound)
        self.assertLessEqual(risk(rebuilt, data), bound)


def identity_network(domain):
    return build_tiny_mlp(domain, [([[1, 0], [0, 1]], [0, 0])])


class IntervalCertificationTest(unittest.TestCase):
    def setUp(self) -> None:
        self.domain = GridDomain.box(2, -10, 10)
        self.mlp = identity_network(self.domain)

    def test_wide_margin_certifies(self) -> None:
        result = ibp_certify(self.mlp, (5, 0), ScaledDistance(2))
        self.assertIs(result.status, CertStatus.CERTIFIED_ROBUST)
        self.assertEqual(result.label, 0)
        self.assertEqual(result.lower, (3, -2))
        self.assertEqual(result.upper, (7, 2))

    def test_narrow_margin_does_not_certify(self) -> None:
        self.assertIs(ibp_certify(self.mlp, (3, 0), ScaledDistance(2)).status, CertStatus.NOT_CERTIFIED)

    def test_zero_radius_certifies_strict_argmax_only(self) -> None:
        self.assertTrue(ibp_certify(self.mlp, (2, 1), ScaledDistance(0)).certified)
        self.assertFalse(ibp_certify(self.mlp, (2, 2), ScaledDistance(0)).certified)

    def test_only_linf_boxes(self) -> None:
        with self.assertRaises(ModelError):
            ibp_certify(self.mlp, (1, 1), ScaledDistance(1), metric=L1())
        with self.assertRaises(ModelError):
            certified_detector(self.mlp, config(self.domain, 2, metric=L1()))

    def test_certified_points_keep_their_label_on_the_ball(self) -> None:
        domain = GridDomain.box(2, 0, 6)
        radius = ScaledDistance(1)
        certified = 0
        for seed in range(100):
            mlp = random_tiny_mlp(seed, domain)
            for point in domain.points():
                result = ibp_certify(mlp, point, radius)
                if not result.certified:
                    continue
                certified += 1
                for neighbour in iter_ball(domain, LINF, point, radius):
                    self.assertEqual(mlp.classify(neighbour), result.label)
        self.assertGreater(certified, 0)

    def test_certified_detector_agrees_with_the_exact_reduction(self) -> None:
        domain = GridDomain.box(2, 0, 6)
        for seed in range(10):
            mlp = random_tiny_mlp(seed, domain)
            cfg = config(domain, 2)
            approx = certified_detector(mlp, cfg)
            exact = classifier_to_detector(mlp, cfg)
            for point in domain.points():
                out = approx.classify_or_reject(point)
                if out is not REJECT:
                    self.assertEqual(exact.classify_or_reject(point), out)

    def test_loose_intervals_reject_what_the_exact_detector_accepts(self) -> None:
        domain = GridDomain.box(1, 1, 5)
        # two hidden copies of 100 * x cancel exactly, but not as intervals
        mlp = build_tiny_mlp(domain, [([[100], [100]], [0, 0]), ([[1, -1], [0, 0]], [1, 0])])
        cfg = config(domain, 2)
        approx = certified_detector(mlp, cfg)
        exact = classifier_to_detector(mlp, cfg)
        self.assertEqual({approx.classify_or_reject(p) for p in domain.points()}, {REJECT})
        self.assertEqual({exact.classify_or_reject(p) for p in domain.points()}, {0})

    def test_certification_rate(self) -> None:
        points = [(5, 0), (3, 0), (0, 9), (1, 1)]
        self.assertEqual(certification_rate(self.mlp, points, ScaledDistance(2)), Fraction(1, 2))
        self.assertIsNone(certification_rate(self.mlp, [], ScaledDistance(2)))


if __name__ == "__main__":
    unittest.main()

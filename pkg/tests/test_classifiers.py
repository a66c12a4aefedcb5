from __future__ import annotations

import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from reductionlab.classifiers import (
    REJECT,
    LinearClassifier,
    build_lookup_classifier,
    build_lookup_detector,
    build_nearest_prototype,
    build_tiny_mlp,
    confidence_threshold_detector,
)
from reductionlab.errors import DimensionMismatchError, DomainError, ModelError
from reductionlab.geometry import L1, LINF, GridDomain
from reductionlab.models import WeightedDataset
from reductionlab.rng import make_rng
from reductionlab.tasks import gen_gaussian_task, gen_random_classifier, gen_random_instance, random_tiny_mlp


class LookupTest(unittest.TestCase):
    def test_classifies_by_table(self) -> None:
        clf = build_lookup_classifier(GridDomain.box(1, 0, 2), [0, 1, 1])
        self.assertEqual(clf.classify((1,)), 1)
        self.assertEqual(clf.num_classes, 2)

    def test_constant_table(self) -> None:
        domain = GridDomain.box(2, 0, 3)
        clf = build_lookup_classifier(domain, [2] * domain.size, num_classes=3)
        self.assertEqual({clf.classify(p) for p in domain.points()}, {2})

    def test_random_table_agrees_everywhere(self) -> None:
        domain = GridDomain.box(2, -2, 3)
        table = [int(v) for v in make_rng(7, "lookup-test").integers(0, 4, size=domain.size)]
        clf = build_lookup_classifier(domain, table, num_classes=4)
        for index, point in enumerate(domain.points()):
            self.assertEqual(clf.classify(point), table[index])

    def test_mapping_table_must_be_complete(self) -> None:
        domain = GridDomain.box(1, 0, 2)
        with self.assertRaises(ModelError):
            build_lookup_classifier(domain, {(0,): 0, (1,): 1})

    def test_classifier_table_cannot_reject(self) -> None:
        with self.assertRaises(ModelError):
            build_lookup_classifier(GridDomain.box(1, 0, 1), [0, None])

    def test_detector_rejects_where_tabulated(self) -> None:
        det = build_lookup_detector(GridDomain.box(1, 0, 4), [0, 0, None, 1, 1])
        self.assertIs(det.classify_or_reject((2,)), REJECT)
        self.assertEqual(det.classify_or_reject((3,)), 1)

    def test_points_outside_the_domain(self) -> None:
        clf = build_lookup_classifier(GridDomain.box(1, 0, 2), [0, 1, 1])
        with self.assertRaises(DomainError):
            clf.classify((3,))


class NearestPrototypeTest(unittest.TestCase):
    def test_line(self) -> None:
        clf = build_nearest_prototype([(0,), (10,)], [0, 1], LINF)
        self.assertEqual(clf.domain, GridDomain.box(1, 0, 10))
        self.assertEqual(clf.classify((4,)), 0)
        self.assertEqual(clf.classify((6,)), 1)

    def test_ties_go_to_the_earlier_prototype(self) -> None:
        self.assertEqual(build_nearest_prototype([(0,), (10,)], [0, 1], LINF).classify((5,)), 0)
        self.assertEqual(build_nearest_prototype([(10,), (0,)], [1, 0], LINF).classify((5,)), 1)

    def test_dimension_mismatch(self) -> None:
        with self.assertRaises(DimensionMismatchError):
            build_nearest_prototype([(0, 0), (1,)], [0, 1], LINF)

    @settings(derandomize=True, deadline=None, max_examples=30)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_agrees_with_brute_force_nearest(self, seed) -> None:
        rng = make_rng(seed, "prototype-test")
        domain = GridDomain.box(2, 0, 7)
        prototypes = [tuple(int(v) for v in row) for row in rng.integers(0, 8, size=(4, 2))]
        labels = [int(v) for v in rng.integers(0, 3, size=4)]
        metric = L1()
        clf = build_nearest_prototype(prototypes, labels, metric, domain=domain, num_classes=3)
        for point in domain.points():
            distances = [metric.raw(point, p) for p in prototypes]
            self.assertEqual(clf.classify(point), labels[distances.index(min(distances))])


class ScoringTest(unittest.TestCase):
    def test_linear_zero_margin_falls_to_class_zero(self) -> None:
        clf = LinearClassifier(GridDomain.box(1, 0, 10), (1,), Fraction(-5))
        self.assertEqual(clf.classify((5,)), 0)
        self.assertEqual(clf.classify((6,)), 1)

    def test_tiny_mlp_forward_pass(self) -> None:
        domain = GridDomain.box(2, -3, 3)
        mlp = build_tiny_mlp(domain, [([[1, 0], [0, 1]], [0, 0]), ([[1, -1], [-1, 1]], ["1/2", 0])])
        # hidden ReLU(x) = (2, 0); logits (2 + 1/2, -2)
        self.assertEqual(mlp.scores((2, -1)), (Fraction(5, 2), Fraction(-2)))
        self.assertEqual(mlp.classify((2, -1)), 0)

    def test_layer_shapes_must_chain(self) -> None:
        with self.assertRaises(ModelError):
            build_tiny_mlp(GridDomain.box(2, 0, 1), [([[1, 0]], [0]), ([[1, 1]], [0])])


class ThresholdTest(unittest.TestCase):
    def setUp(self) -> None:
        self.domain = GridDomain.box(1, 0, 10)
        self.scorer = LinearClassifier(self.domain, (1,), Fraction(-5))

    def test_low_tau_never_rejects(self) -> None:
        det = confidence_threshold_detector(self.scorer, -100)
        for point in self.domain.points():
            self.assertEqual(det.classify_or_reject(point), self.scorer.classify(point))

    def test_high_tau_rejects_everything(self) -> None:
        det = confidence_threshold_detector(self.scorer, 100)
        self.assertTrue(all(det.classify_or_reject(p) is REJECT for p in self.domain.points()))

    def test_reject_band_around_the_boundary(self) -> None:
        det = confidence_threshold_detector(self.scorer, 2)
        rejected = [p[0] for p in self.domain.points() if det.classify_or_reject(p) is REJECT]
        self.assertEqual(rejected, [4, 5, 6])

    @settings(derandomize=True, deadline=None, max_examples=100)
    @given(
        seed=st.integers(min_value=0, max_value=10**6),
        low=st.fractions(min_value=-4, max_value=4, max_denominator=8),
        step=st.fractions(min_value=0, max_value=4, max_denominator=8),
    )
    def test_raising_tau_only_grows_the_reject_set(self, seed, low, step) -> None:
        domain = GridDomain.box(2, 0, 5)
        scorer = random_tiny_mlp(seed, domain, hidden=3, num_classes=3)
        loose = confidence_threshold_detector(scorer, low)
        strict = confidence_threshold_detector(scorer, low + step)

        def rejected(det):
            return {p for p in domain.points() if det.classify_or_reject(p) is REJECT}

        self.assertLessEqual(rejected(loose), rejected(strict))


class TaskGeneratorTest(unittest.TestCase):
    def test_dataset_weights_sum_to_one(self) -> None:
        with self.assertRaises(ModelError):
            WeightedDataset(GridDomain.box(1, 0, 1), 2, (((0,), 0, Fraction(1, 3)),))

    def test_gaussian_tiny_sigma_concentrates_on_the_means(self) -> None:
        domain = GridDomain.box(2, -10, 10)
        data = gen_gaussian_task(2, [3, 3], "1/1000", 40, seed=1, domain=domain)
        for entry in data:
            self.assertEqual(entry.point, (3, 3) if entry.label == 1 else (-3, -3))

    def test_gaussian_is_deterministic(self) -> None:
        domain = GridDomain.box(2, -10, 10)
        self.assertEqual(
            gen_gaussian_task(2, [3, 3], 1, 50, seed=9, domain=domain),
            gen_gaussian_task(2, [3, 3], 1, 50, seed=9, domain=domain),
        )

    def test_gaussian_class_means(self) -> None:
        domain = GridDomain.box(2, -10, 10)
        data = gen_gaussian_task(2, [3, 3], 1, 20000, seed=5, domain=domain)
        points = np.array([e.point for e in data], dtype=float)
        labels = np.array([e.label for e in data])
        np.testing.assert_allclose(points[labels == 1].mean(axis=0), [3, 3], atol=0.1)
        np.testing.assert_allclose(points[labels == 0].mean(axis=0), [-3, -3], atol=0.1)

    def test_gaussian_rejects_degenerate_sigma(self) -> None:
        with self.assertRaises(ModelError):
            gen_gaussian_task(1, [1], 0, 4, seed=0, domain=GridDomain.box(1, -3, 3))

    def test_reject_rate_extremes(self) -> None:
        domain = GridDomain.box(2, 0, 5)
        _, never = gen_random_instance(3, domain, 3, 0, 5)
        _, always = gen_random_instance(3, domain, 3, 1, 5)
        self.assertNotIn(REJECT, never.table)
        self.assertEqual(set(always.table), {REJECT})

    def test_random_instance_is_deterministic(self) -> None:
        domain = GridDomain.box(2, 0, 6)
        first_data, first_det = gen_random_instance(42, domain, 3, Fraction(3, 10), 8)
        second_data, second_det = gen_random_instance(42, domain, 3, Fraction(3, 10), 8)
        self.assertEqual(first_data, second_data)
        self.assertEqual(first_det.table, second_det.table)

    def test_random_classifier_uses_every_label_range(self) -> None:
        domain = GridDomain.box(2, 0, 9)
        clf = gen_random_classifier(4, domain, 10)
        self.assertTrue(all(0 <= label < 10 for label in clf.table))

    def test_random_tiny_mlp_shape(self) -> None:
        mlp = random_tiny_mlp(2, GridDomain.box(2, 0, 5), hidden=3, num_classes=2)
        self.assertEqual([(l.outputs, l.inputs) for l in mlp.layers], [(3, 2), (2, 3)])


if __name__ == "__main__":
    unittest.main()

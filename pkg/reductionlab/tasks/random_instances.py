"""
Seeded random instances for the reduction property suites.

Labels follow random Voronoi regions (nearest of a few random prototypes)
with a little label noise, so robust risks land strictly between 0 and 1
instead of saturating as they would for i.i.d. labels.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..classifiers.lookup import LookupClassifier, LookupDetector
from ..classifiers.prototype import build_nearest_prototype
from ..classifiers.scoring import DenseLayer, TinyMLP
from ..geometry.domain import GridDomain
from ..geometry.metrics import LINF, Metric
from ..models import WeightedDataset
from ..rng import make_rng

Rate = Union[float, Fraction]

LABEL_NOISE = 0.1
DATASET_LABEL_NOISE = 0.2


def _region_labels(
    rng: np.random.Generator, domain: GridDomain, metric: Metric, num_classes: int
) -> List[int]:
    count = int(rng.integers(2, 7))
    lo, hi = list(domain.lo), [h + 1 for h in domain.hi]
    prototypes = [tuple(int(v) for v in row) for row in rng.integers(lo, hi, size=(count, domain.dims))]
    labels = [int(v) for v in rng.integers(0, num_classes, size=count)]
    regions = build_nearest_prototype(prototypes, labels, metric, domain=domain, num_classes=num_classes)
    return [regions.classify(p) for p in domain.points()]


def _noisy(
    rng: np.random.Generator, labels: Sequence[int], num_classes: int, rate: float
) -> List[int]:
    flips = rng.random(len(labels)) < rate
    replacements = rng.integers(0, num_classes, size=len(labels))
    return [int(r) if flip else y for y, flip, r in zip(labels, flips, replacements)]


def gen_random_dataset(
    rng: np.random.Generator,
    domain: GridDomain,
    num_classes: int,
    count: int,
    reference: Sequence[Optional[int]],
) -> WeightedDataset:
    """``count`` weighted points labelled mostly like ``reference``."""

    indices = rng.integers(0, domain.size, size=count)
    points = [domain.point_at(int(i)) for i in indices]
    base = [
        reference[int(i)] if reference[int(i)] is not None else int(rng.integers(0, num_classes))
        for i in indices
    ]
    labels = _noisy(rng, base, num_classes, DATASET_LABEL_NOISE)  # type: ignore[arg-type]
    weights = [int(w) for w in rng.integers(1, 6, size=count)]
    return WeightedDataset.weighted(domain, num_classes, points, labels, weights)


def gen_random_instance(
    seed: int,
    domain: GridDomain,
    num_classes: int,
    reject_rate: Rate,
    count: int,
    metric: Metric = LINF,
) -> Tuple[WeightedDataset, LookupDetector]:
    """Random lookup detector plus a dataset of ``count`` weighted points.

    Each domain point is rejected independently with probability
    ``reject_rate``.
    """

    if not 0 <= reject_rate <= 1:
        raise ValueError(f"reject_rate must lie in [0, 1], got {reject_rate}")
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = make_rng(seed, "random-instance")
    labels = _noisy(rng, _region_labels(rng, domain, metric, num_classes), num_classes, LABEL_NOISE)
    rejected = rng.random(domain.size) < float(reject_rate)
    table = [None if r else y for y, r in zip(labels, rejected)]
    detector = LookupDetector(domain, table, num_classes)
    dataset = gen_random_dataset(rng, domain, num_classes, count, labels)
    return dataset, detector


def gen_random_classifier(
    seed: int, domain: GridDomain, num_classes: int, metric: Metric = LINF
) -> LookupClassifier:
    rng = make_rng(seed, "random-classifier")
    labels = _noisy(rng, _region_labels(rng, domain, metric, num_classes), num_classes, LABEL_NOISE)
    return LookupClassifier(domain, labels, num_classes)


def gen_random_classifier_instance(
    seed: int, domain: GridDomain, num_classes: int, count: int, metric: Metric = LINF
) -> Tuple[WeightedDataset, LookupClassifier]:
    classifier = gen_random_classifier(seed, domain, num_classes, metric)
    rng = make_rng(seed, "random-classifier-dataset")
    dataset = gen_random_dataset(rng, domain, num_classes, count, classifier.table)
    return dataset, classifier


def random_tiny_mlp(
    seed: int,
    domain: GridDomain,
    hidden: int = 4,
    num_classes: int = 2,
    scale: int = 4,
    denominator: int = 4,
) -> TinyMLP:
    """Two-layer network with weights ``k / denominator``, ``|k| <= scale``."""

    rng = make_rng(seed, "tiny-mlp")

    def layer(outputs: int, inputs: int) -> DenseLayer:
        w = rng.integers(-scale, scale + 1, size=(outputs, inputs))
        b = rng.integers(-scale * 4, scale * 4 + 1, size=outputs)
        return DenseLayer(
            weights=tuple(tuple(Fraction(int(v), denominator) for v in row) for row in w),
            bias=tuple(Fraction(int(v), denominator) for v in b),
        )

    return TinyMLP(domain, [layer(hidden, domain.dims), layer(num_classes, hidden)])

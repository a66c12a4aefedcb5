"""
Attack-based lower bound on robust risk.

An example counts as broken only when the attack actually finds a lattice
point inside the ball that the classifier gets wrong, so the result never
exceeds the exact robust risk. Each example spends at most ``attack_budget``
model queries: the clean point first, then greedy coordinate descent on the
class margin (score-based classifiers only), then uniform draws from the
ball's bounding box. When the whole box fits in the budget it is scanned
exhaustively and the bound is tight.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from ..classifiers.base import Classifier, ScoringClassifier
from ..geometry.domain import GridDomain, Point
from ..geometry.enumeration import bounding_box
from ..geometry.metrics import Metric, ScaledDistance
from ..models import DatasetEntry, WeightedDataset
from ..rng import make_rng
from .exact import Radius, _check, _weighted, map_entries

DEFAULT_ATTACK_BUDGET = 10_000


def _margin(clf: ScoringClassifier, point: Point, label: int) -> Fraction:
    scores = clf.scores(point)
    others = [s for i, s in enumerate(scores) if i != label]
    return scores[label] - max(others) if others else Fraction(1)


class _Attack:
    """Query-counted search for a misclassified point in one ball."""

    def __init__(
        self,
        clf: Classifier,
        domain: GridDomain,
        metric: Metric,
        radius: ScaledDistance,
        entry: DatasetEntry,
        attack_budget: int,
        rng: np.random.Generator,
    ) -> None:
        self.clf = clf
        self.domain = domain
        self.metric = metric
        self.radius = radius
        self.x = entry.point
        self.y = entry.label
        self.budget = attack_budget
        self.rng = rng
        self.queries = 0

    def _in_ball(self, point: Point) -> bool:
        return self.domain.contains(point) and self.metric.within(self.x, point, self.radius)

    def _wrong(self, point: Point) -> bool:
        self.queries += 1
        return self.clf.classify(point) != self.y

    def run(self) -> bool:
        if self._wrong(self.x):
            return True
        box = bounding_box(self.domain, self.metric, self.x, self.radius)
        if math.prod(high - low + 1 for low, high in box) <= self.budget:
            return self._exhaustive(box)
        if isinstance(self.clf, ScoringClassifier) and self._descend(self.budget // 2):
            return True
        return self._sample(box)

    def _exhaustive(self, box: List[Tuple[int, int]]) -> bool:
        for point in itertools.product(*(range(low, high + 1) for low, high in box)):
            if point != self.x and self._in_ball(point) and self._wrong(point):
                return True
        return False

    def _descend(self, limit: int) -> bool:
        scorer = self.clf
        assert isinstance(scorer, ScoringClassifier)
        current = self.x
        best = _margin(scorer, current, self.y)
        while self.queries < limit:
            step = None
            for axis in range(self.domain.dims):
                for delta in (-1, 1):
                    candidate = current[:axis] + (current[axis] + delta,) + current[axis + 1 :]
                    if not self._in_ball(candidate) or self.queries >= limit:
                        continue
                    if self._wrong(candidate):
                        return True
                    margin = _margin(scorer, candidate, self.y)
                    if margin < best:
                        best, step = margin, candidate
            if step is None:
                return False
            current = step
        return False

    def _sample(self, box: List[Tuple[int, int]]) -> bool:
        lows = [low for low, _ in box]
        highs = [high + 1 for _, high in box]
        while self.queries < self.budget:
            point = tuple(int(v) for v in self.rng.integers(lows, highs))
            if not self._in_ball(point):
                self.queries += 1
                continue
            if self._wrong(point):
                return True
        return False


def robust_risk_lower_bound(
    clf: Classifier,
    data: WeightedDataset,
    metric: Metric,
    eps: Radius,
    attack_budget: int,
    seed: int,
    workers: int = 1,
) -> Fraction:
    """Weighted fraction of examples for which the attack finds a misclassified point."""

    if attack_budget < 1:
        raise ValueError(f"attack_budget must be at least 1, got {attack_budget}")
    _check(clf, data)
    radius = ScaledDistance.of(eps)

    def broken(item: Tuple[int, DatasetEntry]) -> bool:
        index, entry = item
        rng = make_rng(seed, "attack", index)
        return _Attack(clf, data.domain, metric, radius, entry, attack_budget, rng).run()

    return _weighted(data.entries, map_entries(broken, list(enumerate(data.entries)), workers))

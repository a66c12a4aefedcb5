"""
Nearest-prototype classification.

Prototypes play the role of codewords: a point decodes to the label of the
closest prototype, which is minimum distance decoding under the chosen metric.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

from ..errors import DimensionMismatchError, ModelError
from ..geometry.domain import GridDomain, Point
from ..geometry.metrics import Metric
from .base import Classifier


class NearestPrototypeClassifier(Classifier):
    kind = "nearest_prototype"

    def __init__(
        self,
        domain: GridDomain,
        prototypes: Sequence[Point],
        labels: Sequence[int],
        metric: Metric,
        num_classes: int,
    ) -> None:
        super().__init__(domain, num_classes)
        self.prototypes: Tuple[Point, ...] = tuple(tuple(p) for p in prototypes)
        self.labels: Tuple[int, ...] = tuple(int(y) for y in labels)
        self.metric = metric

    def nearest(self, point: Point) -> int:
        """Index of the closest prototype; ties go to the earliest listed."""

        raw = self.metric.raw
        return min(range(len(self.prototypes)), key=lambda i: (raw(point, self.prototypes[i]), i))

    def classify(self, point: Point) -> int:
        self._require(point)
        return self.labels[self.nearest(point)]


def build_nearest_prototype(
    prototypes: Sequence[Sequence[int]],
    labels: Sequence[int],
    metric: Metric,
    domain: Optional[GridDomain] = None,
    num_classes: Optional[int] = None,
) -> NearestPrototypeClassifier:
    """Classifier labelling each point like its nearest prototype.

    Without ``domain``, the bounding box of the prototypes is used.
    """

    if not prototypes:
        raise ModelError("nearest-prototype classifier needs at least one prototype")
    if len(prototypes) != len(labels):
        raise ModelError(f"{len(prototypes)} prototypes but {len(labels)} labels")
    dims = len(prototypes[0])
    points = [tuple(int(c) for c in p) for p in prototypes]
    for p in points:
        if len(p) != dims:
            raise DimensionMismatchError(f"prototype {p} has {len(p)} coordinates, expected {dims}")
        metric.distance(p, p)
    if domain is None:
        domain = GridDomain(
            lo=tuple(min(p[i] for p in points) for i in range(dims)),
            hi=tuple(max(p[i] for p in points) for i in range(dims)),
        )
    elif domain.dims != dims:
        raise DimensionMismatchError(f"prototypes have {dims} coordinates, domain has {domain.dims}")
    if num_classes is None:
        num_classes = max(labels) + 1
    if any(not 0 <= y < num_classes for y in labels):
        raise ModelError(f"prototype labels must lie in [0, {num_classes})")
    return NearestPrototypeClassifier(domain, points, labels, metric, num_classes)

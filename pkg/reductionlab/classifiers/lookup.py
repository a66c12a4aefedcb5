"""Dense lookup-table classifiers and detectors."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence, Tuple, Union

from ..errors import ModelError
from ..geometry.domain import GridDomain, Point
from .base import Classifier, Detector, DetectorOutput

LabelTable = Union[Sequence[Optional[int]], Mapping[Point, Optional[int]]]


def _tabulate(domain: GridDomain, table: LabelTable) -> Tuple[Optional[int], ...]:
    """Table in domain order, from a dense sequence or a point mapping."""

    if isinstance(table, Mapping):
        missing = [p for p in domain.points() if p not in table]
        if missing:
            raise ModelError(
                f"lookup table misses {len(missing)} domain points, first {missing[0]}"
            )
        return tuple(table[p] for p in domain.points())
    if len(table) != domain.size:
        raise ModelError(f"lookup table has {len(table)} entries, domain has {domain.size} points")
    return tuple(None if v is None else int(v) for v in table)


def _class_count(table: Sequence[Optional[int]], num_classes: Optional[int]) -> int:
    labels = [v for v in table if v is not None]
    if num_classes is None:
        num_classes = max(labels, default=0) + 1
    bad = [v for v in labels if not 0 <= v < num_classes]
    if bad:
        raise ModelError(f"label {bad[0]} outside [0, {num_classes})")
    return num_classes


class LookupClassifier(Classifier):
    kind = "lookup_classifier"

    def __init__(self, domain: GridDomain, table: Sequence[int], num_classes: int) -> None:
        super().__init__(domain, num_classes)
        if any(v is None for v in table):
            raise ModelError("a classifier table cannot contain rejections")
        self.table: Tuple[int, ...] = tuple(table)  # type: ignore[arg-type]

    def classify(self, point: Point) -> int:
        self._require(point)
        return self.table[self.domain.index_of(point)]


class LookupDetector(Detector):
    kind = "lookup_detector"

    def __init__(
        self, domain: GridDomain, table: Sequence[Optional[int]], num_classes: int
    ) -> None:
        super().__init__(domain, num_classes)
        self.table: Tuple[Optional[int], ...] = tuple(table)

    def classify_or_reject(self, point: Point) -> DetectorOutput:
        self._require(point)
        return self.table[self.domain.index_of(point)]


def build_lookup_classifier(
    domain: GridDomain, table: LabelTable, num_classes: Optional[int] = None
) -> LookupClassifier:
    """Classifier returning the tabulated label of every domain point."""

    dense = _tabulate(domain, table)
    return LookupClassifier(domain, dense, _class_count(dense, num_classes))  # type: ignore[arg-type]


def build_lookup_detector(
    domain: GridDomain, table: LabelTable, num_classes: Optional[int] = None
) -> LookupDetector:
    """Detector with a tabulated label or ``None`` (reject) per domain point."""

    dense = _tabulate(domain, table)
    return LookupDetector(domain, dense, _class_count(dense, num_classes))

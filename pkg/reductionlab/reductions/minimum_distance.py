"""
The two exact reductions between robust detection and robust classification.

``detector_to_classifier`` decodes a rejected input to the label of the
nearest non-rejected point within ``eps / 2``, the metric analogue of minimum
distance decoding. ``classifier_to_detector`` rejects any input whose
``eps / 2`` ball is not labelled uniformly.

Both wrappers are lazy: each query scans a lattice ball, so their cost grows
with the ball size. ``memoize`` tabulates the whole domain once at
construction instead.
"""

from __future__ import annotations

import logging
from typing import Dict, Optional

from ..classifiers.base import FALLBACK_LABEL, REJECT, Classifier, Detector, DetectorOutput
from ..errors import DomainError
from ..geometry.domain import GridDomain, Point
from ..geometry.enumeration import iter_ball
from ..rng import make_rng
from .config import FallbackPolicy, ReductionConfig

logger = logging.getLogger(__name__)


def _check_domain(model_domain: GridDomain, cfg: ReductionConfig) -> None:
    if model_domain != cfg.domain:
        raise DomainError("reduction config domain differs from the wrapped model's domain")


class ReducedClassifier(Classifier):
    """Classifier built from a detector robust at radius ``cfg.eps``."""

    kind = "reduced_classifier"

    def __init__(self, detector: Detector, cfg: ReductionConfig) -> None:
        _check_domain(detector.domain, cfg)
        super().__init__(detector.domain, detector.num_classes)
        self.detector = detector
        self.cfg = cfg
        self._table: Optional[Dict[Point, int]] = None
        if cfg.memoize:
            self._table = {p: self._decode(p) for p in self.domain.points()}

    def classify(self, point: Point) -> int:
        if self._table is not None:
            self._require(point)
            return self._table[point]
        return self._decode(point)

    def _decode(self, point: Point) -> int:
        out = self.detector.classify_or_reject(point)
        if out is not REJECT:
            return out
        if not self.cfg.skip_ball_search:
            for candidate in iter_ball(
                self.domain, self.cfg.metric, point, self.cfg.half_radius, self.cfg.budget
            ):
                out = self.detector.classify_or_reject(candidate)
                if out is not REJECT:
                    return out
        return self._fallback(point)

    def _fallback(self, point: Point) -> int:
        if self.cfg.fallback_policy is FallbackPolicy.SEEDED_RANDOM:
            offsets = [c - low for c, low in zip(point, self.domain.lo)]
            rng = make_rng(self.cfg.fallback_seed, "fallback", *offsets)
            return int(rng.integers(0, self.num_classes))
        logger.debug("ball around %s fully rejected; answering the fallback label", point)
        return FALLBACK_LABEL


class ReducedDetector(Detector):
    """Detector built from a classifier robust at radius ``cfg.eps / 2``."""

    kind = "reduced_detector"

    def __init__(self, classifier: Classifier, cfg: ReductionConfig) -> None:
        _check_domain(classifier.domain, cfg)
        super().__init__(classifier.domain, classifier.num_classes)
        self.classifier = classifier
        self.cfg = cfg
        self._table: Optional[Dict[Point, DetectorOutput]] = None
        if cfg.memoize:
            self._table = {p: self._screen(p) for p in self.domain.points()}

    def classify_or_reject(self, point: Point) -> DetectorOutput:
        if self._table is not None:
            self._require(point)
            return self._table[point]
        return self._screen(point)

    def _screen(self, point: Point) -> DetectorOutput:
        label = self.classifier.classify(point)
        if self.cfg.skip_ball_search:
            return label
        for candidate in iter_ball(
            self.domain, self.cfg.metric, point, self.cfg.half_radius, self.cfg.budget
        ):
            if self.classifier.classify(candidate) != label:
                return REJECT
        return label


def detector_to_classifier(det: Detector, cfg: ReductionConfig) -> ReducedClassifier:
    """Classifier whose robust risk at ``eps / 2`` is at most the detector's
    robust risk with detection at ``eps``."""

    return ReducedClassifier(det, cfg)


def classifier_to_detector(clf: Classifier, cfg: ReductionConfig) -> ReducedDetector:
    """Detector whose risk and robust risk with detection at ``eps`` are at most
    the classifier's robust risk at ``eps / 2``."""

    return ReducedDetector(clf, cfg)

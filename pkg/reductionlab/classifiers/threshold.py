"""Detectors that reject low-confidence inputs."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from ..geometry.domain import Point
from .base import REJECT, Detector, DetectorOutput, ScoringClassifier, argmax


class ConfidenceThresholdDetector(Detector):
    """Rejects when the top class score is below ``tau``.

    Raising ``tau`` can only grow the reject set.
    """

    kind = "confidence_threshold"

    def __init__(self, scorer: ScoringClassifier, tau: Fraction) -> None:
        super().__init__(scorer.domain, scorer.num_classes)
        self.scorer = scorer
        self.tau = Fraction(tau)

    def classify_or_reject(self, point: Point) -> DetectorOutput:
        scores = self.scorer.scores(point)
        best = argmax(scores)
        if scores[best] < self.tau:
            return REJECT
        return best


def confidence_threshold_detector(
    scorer: ScoringClassifier, tau: Union[int, str, Fraction]
) -> ConfidenceThresholdDetector:
    return ConfidenceThresholdDetector(scorer, Fraction(tau))

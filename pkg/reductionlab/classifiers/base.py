"""
Classifier and detector interfaces.

Models are deterministic and total over their grid domain. A detector may
answer ``REJECT`` (``None``) instead of a label. Models are immutable once
built, so they can be shared between threads.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import DomainError, ModelError
from ..geometry.domain import GridDomain, Point

REJECT = None
DetectorOutput = Optional[int]

# Label returned by a reduced classifier whose fallback is worst-case; it lies
# outside [0, C) so every evaluation counts it as wrong.
FALLBACK_LABEL = -1


class Model(ABC):
    """Common state of classifiers and detectors."""

    kind: str = ""

    def __init__(self, domain: GridDomain, num_classes: int) -> None:
        if num_classes < 1:
            raise ModelError(f"num_classes must be positive, got {num_classes}")
        self.domain = domain
        self.num_classes = num_classes

    @abstractmethod
    def evaluate(self, point: Point) -> DetectorOutput:
        """Uniform entry point used by the risk evaluators."""

    def _require(self, point: Point) -> None:
        if not self.domain.contains(point):
            raise DomainError(f"point {point} lies outside the model domain")


class Classifier(Model):
    """Decision function ``point -> label``."""

    @abstractmethod
    def classify(self, point: Point) -> int:
        """Label of ``point``."""

    def evaluate(self, point: Point) -> DetectorOutput:
        return self.classify(point)


class Detector(Model):
    """Decision function ``point -> label or REJECT``."""

    @abstractmethod
    def classify_or_reject(self, point: Point) -> DetectorOutput:
        """Label of ``point``, or ``REJECT`` when the input looks perturbed."""

    def evaluate(self, point: Point) -> DetectorOutput:
        return self.classify_or_reject(point)


class ScoringClassifier(Classifier):
    """Classifier exposing one rational score per class."""

    @abstractmethod
    def scores(self, point: Point) -> Sequence[Fraction]:
        """Class scores at ``point``."""

    def classify(self, point: Point) -> int:
        return argmax(self.scores(point))


def argmax(values: Sequence[Fraction]) -> int:
    """Index of the largest value; ties go to the lowest index."""

    best = 0
    for index in range(1, len(values)):
        if values[index] > values[best]:
            best = index
    return best

"""Executable reductions between robust detection and robust classification."""

from .config import FallbackPolicy, ReductionConfig
from .ibp import (
    CertifiedDetector,
    CertResult,
    CertStatus,
    certification_rate,
    certified_detector,
    ibp_certify,
    propagate_intervals,
)
from .minimum_distance import (
    ReducedClassifier,
    ReducedDetector,
    classifier_to_detector,
    detector_to_classifier,
)

__all__ = [
    "CertResult",
    "CertStatus",
    "CertifiedDetector",
    "FallbackPolicy",
    "ReducedClassifier",
    "ReducedDetector",
    "ReductionConfig",
    "certification_rate",
    "certified_detector",
    "classifier_to_detector",
    "detector_to_classifier",
    "ibp_certify",
    "propagate_intervals",
]

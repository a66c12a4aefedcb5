"""Deterministic toy classifiers and detectors over grid domains."""

from .base import (
    FALLBACK_LABEL,
    REJECT,
    Classifier,
    Detector,
    DetectorOutput,
    Model,
    ScoringClassifier,
    argmax,
)
from .lookup import LookupClassifier, LookupDetector, build_lookup_classifier, build_lookup_detector
from .prototype import NearestPrototypeClassifier, build_nearest_prototype
from .scoring import DenseLayer, LinearClassifier, TinyMLP, build_tiny_mlp
from .threshold import ConfidenceThresholdDetector, confidence_threshold_detector

__all__ = [
    "FALLBACK_LABEL",
    "REJECT",
    "Classifier",
    "ConfidenceThresholdDetector",
    "DenseLayer",
    "Detector",
    "DetectorOutput",
    "LinearClassifier",
    "LookupClassifier",
    "LookupDetector",
    "Model",
    "NearestPrototypeClassifier",
    "ScoringClassifier",
    "TinyMLP",
    "argmax",
    "build_lookup_classifier",
    "build_lookup_detector",
    "build_nearest_prototype",
    "build_tiny_mlp",
    "confidence_threshold_detector",
]

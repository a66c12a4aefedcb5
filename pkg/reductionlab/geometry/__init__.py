"""Exact lattice geometry: domains, metrics and ball enumeration."""

from .axioms import AxiomReport, midpoint, verify_metric_axioms
from .domain import GridDomain, Point
from .enumeration import DEFAULT_BUDGET, ball_points, ball_size, iter_ball
from .metrics import (
    L1,
    L2,
    LINF,
    METRIC_TAGS,
    L2Squared,
    LInf,
    Metric,
    ScaledDistance,
    WeightedHamming,
    metric_from_dict,
    metric_from_tag,
)

__all__ = [
    "AxiomReport",
    "DEFAULT_BUDGET",
    "GridDomain",
    "L1",
    "L2",
    "L2Squared",
    "LINF",
    "LInf",
    "METRIC_TAGS",
    "Metric",
    "Point",
    "ScaledDistance",
    "WeightedHamming",
    "ball_points",
    "ball_size",
    "iter_ball",
    "metric_from_dict",
    "metric_from_tag",
    "midpoint",
    "verify_metric_axioms",
]

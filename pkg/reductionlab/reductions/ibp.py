"""
Interval bound propagation for :class:`TinyMLP` and the certified detector.

Intervals travel through each affine layer in center/radius form
(``W c + b``, ``|W| r``) and through ReLU by clamping both ends at zero. All
bounds are exact rationals. Certification is sound but incomplete: a
certified point has a constant label over the whole box, while a robust point
may still fail to certify.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from ..classifiers.base import REJECT, Detector, DetectorOutput, argmax
from ..classifiers.scoring import TinyMLP
from ..errors import ModelError
from ..geometry.domain import Point
from ..geometry.metrics import LINF, LInf, Metric, ScaledDistance
from .config import ReductionConfig


class CertStatus(str, enum.Enum):
    CERTIFIED_ROBUST = "certified-robust"
    NOT_CERTIFIED = "not-certified"


@dataclass(frozen=True)
class CertResult:
    """Verdict plus the logit intervals it was derived from."""

    status: CertStatus
    label: int
    lower: Tuple[Fraction, ...]
    upper: Tuple[Fraction, ...]

    @property
    def certified(self) -> bool:
        return self.status is CertStatus.CERTIFIED_ROBUST


def _require_linf(metric: Metric) -> None:
    if not isinstance(metric, LInf):
        raise ModelError(f"interval propagation bounds LInf boxes only, not {metric.tag}")


def propagate_intervals(
    mlp: TinyMLP, lower: Sequence[Fraction], upper: Sequence[Fraction]
) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """Logit bounds over the input box ``[lower, upper]``."""

    lo = np.array([Fraction(v) for v in lower], dtype=object)
    hi = np.array([Fraction(v) for v in upper], dtype=object)
    last = len(mlp.affine) - 1
    for index, (w, b) in enumerate(mlp.affine):
        center = (hi + lo) / 2
        radius = (hi - lo) / 2
        center = w.dot(center) + b
        radius = np.abs(w).dot(radius)
        lo, hi = center - radius, center + radius
        if index < last:
            lo, hi = np.maximum(lo, 0), np.maximum(hi, 0)
    return tuple(Fraction(v) for v in lo), tuple(Fraction(v) for v in hi)


def ibp_certify(
    mlp: TinyMLP,
    x: Point,
    eps: ScaledDistance,
    metric: Metric = LINF,
) -> CertResult:
    """Certify that ``mlp`` keeps its label on the LInf box of radius ``eps`` around ``x``.

    Certified iff the lower bound of the nominal argmax logit strictly exceeds
    the upper bound of every other logit.
    """

    _require_linf(metric)
    radius = ScaledDistance.of(eps).value
    label = argmax(mlp.scores(x))
    lower, upper = propagate_intervals(mlp, [c - radius for c in x], [c + radius for c in x])
    robust = all(lower[label] > upper[j] for j in range(len(upper)) if j != label)
    return CertResult(
        status=CertStatus.CERTIFIED_ROBUST if robust else CertStatus.NOT_CERTIFIED,
        label=label,
        lower=lower,
        upper=upper,
    )


class CertifiedDetector(Detector):
    """Accepts exactly the points certified at radius ``cfg.eps / 2``."""

    kind = "certified_detector"

    def __init__(self, mlp: TinyMLP, cfg: ReductionConfig) -> None:
        _require_linf(cfg.metric)
        super().__init__(mlp.domain, mlp.num_classes)
        self.mlp = mlp
        self.cfg = cfg

    def certify(self, point: Point) -> CertResult:
        return ibp_certify(self.mlp, point, self.cfg.half_radius, self.cfg.metric)

    def classify_or_reject(self, point: Point) -> DetectorOutput:
        self._require(point)
        result = self.certify(point)
        return result.label if result.certified else REJECT


def certified_detector(mlp: TinyMLP, cfg: ReductionConfig) -> CertifiedDetector:
    return CertifiedDetector(mlp, cfg)


def certification_rate(
    mlp: TinyMLP, points: Sequence[Point], eps: ScaledDistance
) -> Optional[Fraction]:
    """Fraction of ``points`` certified at ``eps``; ``None`` for no points."""

    if not points:
        return None
    certified = sum(ibp_certify(mlp, p, eps).certified for p in points)
    return Fraction(certified, len(points))

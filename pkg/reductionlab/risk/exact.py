"""
Exact evaluators for risk, robust risk and robust risk with detection.

The inner maximum over perturbations ranges over lattice points of the
domain, enumerated nearest first, so every value is an exact weighted sum.
Per-example work is independent; with ``workers > 1`` it runs on a thread
pool and the aggregate is the same exact rational as a serial run.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, TypeVar, Union

from ..classifiers.base import REJECT, Classifier, Detector, Model
from ..errors import DomainError, ModelError
from ..geometry.enumeration import DEFAULT_BUDGET, iter_ball
from ..geometry.metrics import Metric, ScaledDistance
from ..models import DatasetEntry, EvaluationMode, RiskReport, WeightedDataset, weight_of
from .bounds import union_bound

logger = logging.getLogger(__name__)

Radius = Union[ScaledDistance, int, str, Fraction]
E = TypeVar("E")
T = TypeVar("T")


def _check(model: Model, data: WeightedDataset) -> None:
    if not data.entries:
        raise ValueError("cannot evaluate a risk on an empty dataset")
    if model.domain != data.domain:
        raise DomainError(
            f"model domain {model.domain.lo}..{model.domain.hi} differs from dataset domain "
            f"{data.domain.lo}..{data.domain.hi}"
        )


def map_entries(fn: Callable[[E], T], entries: Sequence[E], workers: int = 1) -> List[T]:
    """Apply ``fn`` to every item, preserving order."""

    if workers <= 1 or len(entries) <= 1:
        return [fn(entry) for entry in entries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, entries))


def _weighted(entries: Sequence[DatasetEntry], flags: Sequence[bool]) -> Fraction:
    return weight_of(entry for entry, flag in zip(entries, flags) if flag)


def risk(model: Model, data: WeightedDataset) -> Fraction:
    """Weighted fraction of clean examples the model gets wrong.

    A detector rejecting a clean example counts as an error.
    """

    _check(model, data)
    return weight_of(entry for entry in data if model.evaluate(entry.point) != entry.label)


def _ball_misclassified(
    clf: Classifier, data: WeightedDataset, metric: Metric, eps: ScaledDistance, budget: int
) -> Callable[[DatasetEntry], bool]:
    def fails(entry: DatasetEntry) -> bool:
        return any(
            clf.classify(p) != entry.label
            for p in iter_ball(data.domain, metric, entry.point, eps, budget)
        )

    return fails


def _ball_wrong_accept(
    det: Detector, data: WeightedDataset, metric: Metric, eps: ScaledDistance, budget: int
) -> Callable[[DatasetEntry], bool]:
    def fails(entry: DatasetEntry) -> bool:
        for p in iter_ball(data.domain, metric, entry.point, eps, budget):
            out = det.classify_or_reject(p)
            if out is not REJECT and out != entry.label:
                return True
        return False

    return fails


def robust_risk_exact(
    clf: Classifier,
    data: WeightedDataset,
    metric: Metric,
    eps: Radius,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> Fraction:
    """Weighted fraction of examples with a misclassified lattice point within ``eps``."""

    if not isinstance(clf, Classifier):
        raise ModelError("robust risk is defined for classifiers; use robust_risk_det_exact")
    _check(clf, data)
    radius = ScaledDistance.of(eps)
    flags = map_entries(_ball_misclassified(clf, data, metric, radius, budget), data.entries, workers)
    return _weighted(data.entries, flags)


def robust_risk_det_exact(
    det: Detector,
    data: WeightedDataset,
    metric: Metric,
    eps: Radius,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> Fraction:
    """Weighted fraction of examples where the detector errs clean, or
    accepts some perturbation within ``eps`` with a wrong label."""

    if not isinstance(det, Detector):
        raise ModelError("robust risk with detection needs a detector")
    _check(det, data)
    radius = ScaledDistance.of(eps)
    wrong_accept = _ball_wrong_accept(det, data, metric, radius, budget)

    def fails(entry: DatasetEntry) -> bool:
        return det.classify_or_reject(entry.point) != entry.label or wrong_accept(entry)

    return _weighted(data.entries, map_entries(fails, data.entries, workers))


@dataclass(frozen=True)
class ErrorDecomposition:
    """Exact weighted rates entering the union bound on a toy instance.

    ``fpr``: clean examples rejected. ``fnr``: examples with some point of the
    ball accepted under a wrong label. ``clean_risk``: clean examples not
    labelled correctly.
    """

    fpr: Fraction
    fnr: Fraction
    clean_risk: Fraction

    @property
    def bound(self) -> Fraction:
        return union_bound(self.fpr, self.fnr, self.clean_risk)


def decompose_detector_errors(
    det: Detector,
    data: WeightedDataset,
    metric: Metric,
    eps: Radius,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> ErrorDecomposition:
    _check(det, data)
    radius = ScaledDistance.of(eps)
    clean = [det.classify_or_reject(entry.point) for entry in data.entries]
    accepted_wrong = map_entries(
        _ball_wrong_accept(det, data, metric, radius, budget), data.entries, workers
    )
    return ErrorDecomposition(
        fpr=_weighted(data.entries, [out is REJECT for out in clean]),
        fnr=_weighted(data.entries, accepted_wrong),
        clean_risk=_weighted(
            data.entries, [out != entry.label for out, entry in zip(clean, data.entries)]
        ),
    )


def evaluate(
    model: Model,
    data: WeightedDataset,
    metric: Metric,
    eps: Radius,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> RiskReport:
    """Full :class:`RiskReport` for a classifier or detector at radius ``eps``."""

    _check(model, data)
    radius = ScaledDistance.of(eps)
    clean = [model.evaluate(entry.point) for entry in data.entries]
    clean_wrong = [out != entry.label for out, entry in zip(clean, data.entries)]
    if isinstance(model, Detector):
        ball_fail = map_entries(
            _ball_wrong_accept(model, data, metric, radius, budget), data.entries, workers
        )
        failed = [c or b for c, b in zip(clean_wrong, ball_fail)]
    elif isinstance(model, Classifier):
        failed = map_entries(
            _ball_misclassified(model, data, metric, radius, budget), data.entries, workers
        )
    else:
        raise ModelError(f"cannot evaluate {type(model).__name__}")

    report = RiskReport(
        model_kind=model.kind,
        metric=metric.tag,
        examples=len(data.entries),
        risk=_weighted(data.entries, clean_wrong),
        eps=radius.value,
        mode=EvaluationMode.EXACT,
        clean_errors=sum(clean_wrong),
        clean_rejections=sum(out is REJECT for out in clean),
        adversarial_errors=sum(f and not c for f, c in zip(failed, clean_wrong)),
    )
    if isinstance(model, Detector):
        report.robust_risk_det = _weighted(data.entries, failed)
        report.union_bound = union_bound(
            _weighted(data.entries, [out is REJECT for out in clean]),
            _weighted(data.entries, ball_fail),
            report.risk,
        )
    else:
        report.robust_risk = _weighted(data.entries, failed)
    logger.debug(
        "evaluated %s on %d examples at eps=%s: %s", model.kind, report.examples, radius, report
    )
    return report

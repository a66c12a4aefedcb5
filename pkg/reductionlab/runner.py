"""
Property-suite runner for the detector/classifier reductions.

The runner draws seeded random instances, builds both reductions on them and
checks the risk inequalities they guarantee with exact rational comparison.
Resource monitors observe the batch without taking part in it. Every failing
instance is written out as a self-contained reproducer that ``replay`` can
re-check.
"""

from __future__ import annotations

import json
import logging
import pathlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .classifiers.base import Classifier, Detector, Model
from .geometry.domain import GridDomain
from .geometry.metrics import Metric, metric_from_dict, metric_from_tag
from .models import ResourceArtifact, SuiteExecution, VerificationSession, Violation, WeightedDataset
from .monitoring import ResourceMonitor
from .reductions.config import FallbackPolicy, ReductionConfig
from .reductions.minimum_distance import classifier_to_detector, detector_to_classifier
from .risk.exact import decompose_detector_errors, map_entries, risk, robust_risk_det_exact, robust_risk_exact
from .rng import make_rng
from .serialization import dataset_from_dict, dataset_to_dict, dumps, model_from_dict, model_to_dict
from .tasks.random_instances import gen_random_classifier_instance, gen_random_instance
from .verification.loader import SuiteProfile

logger = logging.getLogger(__name__)

REPRODUCER_FORMAT = "reductionlab.reproducer"
_SEED_SPACE = 2**62


@dataclass(frozen=True)
class SuiteInstance:
    """Shape parameters of one generated instance."""

    index: int
    seed: int
    domain: GridDomain
    metric: Metric
    eps: int
    num_classes: int
    reject_rate: Fraction
    dataset_size: int


@dataclass
class _Failure:
    prop: str
    evidence: Dict[str, str]
    model: Model
    data: WeightedDataset


@dataclass
class InstanceOutcome:
    instance: SuiteInstance
    checks: int = 0
    failures: List[_Failure] = field(default_factory=list)
    union_gap: Optional[Fraction] = None


def instance_seed(seed: int, index: int) -> int:
    return int(make_rng(seed, "suite-instance", index).integers(0, _SEED_SPACE))


def draw_instance(profile: SuiteProfile, seed: int, index: int) -> SuiteInstance:
    """Instance ``index`` of the suite seeded with ``seed``; depends on nothing else."""

    own_seed = instance_seed(seed, index)
    rng = make_rng(own_seed, "instance-shape")
    sides = rng.integers(profile.min_side, profile.max_side + 1, size=profile.dims)

    def pick(options: Sequence[Any]) -> Any:
        return options[int(rng.integers(0, len(options)))]

    return SuiteInstance(
        index=index,
        seed=own_seed,
        domain=GridDomain(lo=(0,) * profile.dims, hi=tuple(int(s) - 1 for s in sides)),
        metric=metric_from_tag(pick(profile.metrics)),
        eps=int(pick(profile.radii)),
        num_classes=int(pick(profile.class_counts)),
        reject_rate=Fraction(pick(profile.reject_rates)),
        dataset_size=profile.dataset_size,
    )


def _config(domain: GridDomain, metric: Metric, eps: int, mutate: bool, **extra: Any) -> ReductionConfig:
    return ReductionConfig(metric=metric, eps=eps, domain=domain, memoize=True, skip_ball_search=mutate, **extra)


def _evidence(**values: Fraction) -> Dict[str, str]:
    return {name: str(value) for name, value in values.items()}


# --- properties -------------------------------------------------------------


def check_detector_to_classifier(
    det: Detector, data: WeightedDataset, metric: Metric, eps: int, mutate: bool = False
) -> Tuple[int, List[Tuple[str, Dict[str, str]]]]:
    """Both inequalities of the detector-to-classifier reduction."""

    cfg = _config(data.domain, metric, eps, mutate)
    clf = detector_to_classifier(det, cfg)
    failures = []
    clf_risk, det_risk = risk(clf, data), risk(det, data)
    if clf_risk > det_risk:
        failures.append(("det_to_clf.risk", _evidence(classifier_risk=clf_risk, detector_risk=det_risk)))
    clf_robust = robust_risk_exact(clf, data, metric, cfg.half_radius)
    det_robust = robust_risk_det_exact(det, data, metric, eps)
    if clf_robust > det_robust:
        failures.append(
            ("det_to_clf.robust", _evidence(classifier_robust_risk=clf_robust, detector_robust_risk_det=det_robust))
        )
    return 2, failures


def check_classifier_to_detector(
    clf: Classifier, data: WeightedDataset, metric: Metric, eps: int, mutate: bool = False
) -> Tuple[int, List[Tuple[str, Dict[str, str]]]]:
    """Both inequalities of the classifier-to-detector reduction."""

    cfg = _config(data.domain, metric, eps, mutate)
    det = classifier_to_detector(clf, cfg)
    failures = []
    clf_robust = robust_risk_exact(clf, data, metric, cfg.half_radius)
    det_risk = risk(det, data)
    if det_risk > clf_robust:
        failures.append(("clf_to_det.risk", _evidence(detector_risk=det_risk, classifier_robust_risk=clf_robust)))
    det_robust = robust_risk_det_exact(det, data, metric, eps)
    if det_robust > clf_robust:
        failures.append(
            ("clf_to_det.robust", _evidence(detector_robust_risk_det=det_robust, classifier_robust_risk=clf_robust))
        )
    return 2, failures


def check_round_trip(
    clf: Classifier, data: WeightedDataset, metric: Metric, eps: int, mutate: bool = False
) -> Tuple[int, List[Tuple[str, Dict[str, str]]]]:
    """Classifier to detector and back, both at ``eps``.

    The rebuilt classifier's clean risk and its robust risk at ``eps / 4`` stay
    within the original's robust risk at ``eps / 2``.
    """

    cfg = _config(data.domain, metric, eps, mutate)
    rebuilt = detector_to_classifier(classifier_to_detector(clf, cfg), cfg)
    failures = []
    original_robust = robust_risk_exact(clf, data, metric, cfg.half_radius)
    rebuilt_risk = risk(rebuilt, data)
    if rebuilt_risk > original_robust:
        failures.append(
            ("round_trip.risk", _evidence(rebuilt_risk=rebuilt_risk, original_robust_risk=original_robust))
        )
    rebuilt_robust = robust_risk_exact(rebuilt, data, metric, cfg.half_radius.half())
    if rebuilt_robust > original_robust:
        failures.append(
            ("round_trip.robust", _evidence(rebuilt_robust_risk=rebuilt_robust, original_robust_risk=original_robust))
        )
    return 2, failures


def check_union_bound(
    det: Detector, data: WeightedDataset, metric: Metric, eps: int
) -> Tuple[int, List[Tuple[str, Dict[str, str]]], Fraction]:
    """The union bound never undercuts the exact robust risk with detection."""

    decomposition = decompose_detector_errors(det, data, metric, eps)
    exact = robust_risk_det_exact(det, data, metric, eps)
    failures = []
    if decomposition.bound < exact:
        failures.append(("union_bound", _evidence(bound=decomposition.bound, robust_risk_det=exact)))
    return 1, failures, decomposition.bound - exact


def check_seeded_fallback(
    det: Detector, data: WeightedDataset, metric: Metric, eps: int, seed: int, mutate: bool = False
) -> Tuple[int, List[Tuple[str, Dict[str, str]]]]:
    """A seeded random fallback never does worse than the always-wrong one."""

    worst = detector_to_classifier(det, _config(data.domain, metric, eps, mutate))
    seeded = detector_to_classifier(
        det,
        _config(data.domain, metric, eps, mutate, fallback_seed=seed, fallback_policy=FallbackPolicy.SEEDED_RANDOM),
    )
    half = worst.cfg.half_radius
    failures = []
    seeded_risk, worst_risk = risk(seeded, data), risk(worst, data)
    if seeded_risk > worst_risk:
        failures.append(("seeded_fallback.risk", _evidence(seeded=seeded_risk, worst_case=worst_risk)))
    seeded_robust = robust_risk_exact(seeded, data, metric, half)
    worst_robust = robust_risk_exact(worst, data, metric, half)
    if seeded_robust > worst_robust:
        failures.append(("seeded_fallback.robust", _evidence(seeded=seeded_robust, worst_case=worst_robust)))
    return 2, failures


# --- runner -----------------------------------------------------------------


class SuiteRunner:
    """Runs one profile of the property suite under resource monitors."""

    def __init__(
        self,
        profile: SuiteProfile,
        seed: int,
        workers: int = 1,
        mutate: bool = False,
        reproducer_dir: Optional[pathlib.Path] = None,
        monitors: Iterable[ResourceMonitor] = (),
    ) -> None:
        self.profile = profile
        self.seed = seed
        self.workers = workers
        self.mutate = mutate
        self.reproducer_dir = pathlib.Path(reproducer_dir) if reproducer_dir is not None else None
        self.monitors = list(monitors)

    def run(self) -> VerificationSession:
        started_at = datetime.now(timezone.utc)
        artifacts: List[ResourceArtifact] = []
        for monitor in self.monitors:
            monitor.start()
        try:
            outcomes = map_entries(self.run_instance, list(range(self.profile.instances)), self.workers)
        finally:
            for monitor in self.monitors:
                artifacts.append(monitor.stop())
        finished_at = datetime.now(timezone.utc)

        violations: List[Violation] = []
        for outcome in outcomes:
            for failure in outcome.failures:
                violations.append(self._record(outcome.instance, failure))
        gaps = [o.union_gap for o in outcomes if o.union_gap is not None]
        stats: Dict[str, Any] = {
            "properties": ", ".join(self.profile.properties),
            "violations": len(violations),
        }
        if gaps:
            stats["union_bound_gap_max"] = str(max(gaps))
            stats["union_bound_gap_mean"] = str(sum(gaps, Fraction(0)) / len(gaps))
        if self.mutate:
            stats["mutated"] = "ball search disabled"
        execution = SuiteExecution(
            instances=len(outcomes),
            checks=sum(o.checks for o in outcomes),
            started_at=started_at,
            finished_at=finished_at,
        )
        return VerificationSession(
            profile=self.profile.name,
            seed=self.seed,
            execution=execution,
            artifacts=artifacts,
            violations=violations,
            stats=stats,
        )

    def run_instance(self, index: int) -> InstanceOutcome:
        inst = draw_instance(self.profile, self.seed, index)
        outcome = InstanceOutcome(instance=inst)
        props = self.profile.properties

        def collect(found: List[Tuple[str, Dict[str, str]]], model: Model, data: WeightedDataset) -> None:
            outcome.failures.extend(_Failure(prop, evidence, model, data) for prop, evidence in found)

        if {"det_to_clf", "union_bound", "seeded_fallback"} & set(props):
            data, det = gen_random_instance(
                inst.seed, inst.domain, inst.num_classes, inst.reject_rate, inst.dataset_size, inst.metric
            )
            if "det_to_clf" in props:
                checks, found = check_detector_to_classifier(det, data, inst.metric, inst.eps, self.mutate)
                outcome.checks += checks
                collect(found, det, data)
            if "union_bound" in props:
                checks, found, gap = check_union_bound(det, data, inst.metric, inst.eps)
                outcome.checks += checks
                outcome.union_gap = gap
                collect(found, det, data)
            if "seeded_fallback" in props:
                checks, found = check_seeded_fallback(det, data, inst.metric, inst.eps, inst.seed, self.mutate)
                outcome.checks += checks
                collect(found, det, data)
        if {"clf_to_det", "round_trip"} & set(props):
            data, clf = gen_random_classifier_instance(
                inst.seed, inst.domain, inst.num_classes, inst.dataset_size, inst.metric
            )
            if "clf_to_det" in props:
                checks, found = check_classifier_to_detector(clf, data, inst.metric, inst.eps, self.mutate)
                outcome.checks += checks
                collect(found, clf, data)
            if "round_trip" in props:
                checks, found = check_round_trip(clf, data, inst.metric, inst.eps, self.mutate)
                outcome.checks += checks
                collect(found, clf, data)

        if (index + 1) % 100 == 0:
            logger.info("checked %d of %d instances", index + 1, self.profile.instances)
        return outcome

    def _record(self, inst: SuiteInstance, failure: _Failure) -> Violation:
        violation = Violation(
            instance_index=inst.index,
            instance_seed=inst.seed,
            prop=failure.prop,
            evidence=failure.evidence,
        )
        logger.warning("violation of %s on instance %d: %s", failure.prop, inst.index, failure.evidence)
        if self.reproducer_dir is not None:
            self.reproducer_dir.mkdir(parents=True, exist_ok=True)
            path = self.reproducer_dir / f"violation-{inst.index:05d}-{failure.prop}.json"
            path.write_text(dumps(self._reproducer(inst, failure)), encoding="utf-8")
            violation.reproducer = str(path)
        return violation

    def _reproducer(self, inst: SuiteInstance, failure: _Failure) -> Dict[str, Any]:
        return {
            "format": REPRODUCER_FORMAT,
            "version": 1,
            "profile": self.profile.name,
            "suite_seed": self.seed,
            "instance_index": inst.index,
            "instance_seed": inst.seed,
            "property": failure.prop,
            "metric": inst.metric.to_dict(),
            "eps": inst.eps,
            "mutated": self.mutate,
            "evidence": failure.evidence,
            "model": model_to_dict(failure.model),
            "dataset": dataset_to_dict(failure.data),
        }


def replay(path: pathlib.Path) -> List[Tuple[str, Dict[str, str]]]:
    """Re-check the property family recorded in a reproducer file.

    Returns the failures found now; an empty list means the instance passes.
    """

    payload = json.loads(pathlib.Path(path).read_text(encoding="utf-8"))
    model = model_from_dict(payload["model"], source=str(path))
    data = dataset_from_dict(payload["dataset"], source=str(path))
    metric = metric_from_dict(payload["metric"])
    eps = int(payload["eps"])
    mutate = bool(payload.get("mutated", False))
    family = str(payload["property"]).split(".")[0]
    if family == "det_to_clf":
        return check_detector_to_classifier(model, data, metric, eps, mutate)[1]  # type: ignore[arg-type]
    if family == "clf_to_det":
        return check_classifier_to_detector(model, data, metric, eps, mutate)[1]  # type: ignore[arg-type]
    if family == "round_trip":
        return check_round_trip(model, data, metric, eps, mutate)[1]  # type: ignore[arg-type]
    if family == "union_bound":
        return check_union_bound(model, data, metric, eps)[1]  # type: ignore[arg-type]
    if family == "seeded_fallback":
        return check_seeded_fallback(model, data, metric, eps, int(payload["instance_seed"]), mutate)[1]  # type: ignore[arg-type]
    raise ValueError(f"unknown property {payload['property']!r}")

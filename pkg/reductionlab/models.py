"""
Core data records exchanged between reductionlab stages.

Evaluators, reductions, the claims auditor and the reporters pass these
dataclasses around instead of reaching into each other's internals. Every
probability-like quantity is a ``Fraction`` so results compare exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import DomainError, ModelError
from .geometry.domain import GridDomain, Point


class DatasetEntry(NamedTuple):
    point: Point
    label: int
    weight: Fraction


@dataclass(frozen=True)
class WeightedDataset:
    """Finite weighted sample standing in for the data distribution.

    Expectations over the distribution become exact weighted sums over
    ``entries``; weights must sum to exactly one.
    """

    domain: GridDomain
    num_classes: int
    entries: Tuple[DatasetEntry, ...]

    def __post_init__(self) -> None:
        if self.num_classes < 1:
            raise ModelError(f"num_classes must be positive, got {self.num_classes}")
        normalized = []
        for point, label, weight in self.entries:
            point = self.domain.check(point)
            weight = Fraction(weight)
            if not 0 <= label < self.num_classes:
                raise DomainError(f"label {label} outside [0, {self.num_classes})")
            if weight <= 0:
                raise ModelError(f"weights must be positive, got {weight} at {point}")
            normalized.append(DatasetEntry(point, int(label), weight))
        if normalized and sum(entry.weight for entry in normalized) != 1:
            raise ModelError("dataset weights must sum to exactly 1")
        object.__setattr__(self, "entries", tuple(normalized))

    @classmethod
    def uniform(
        cls,
        domain: GridDomain,
        num_classes: int,
        points: Sequence[Sequence[int]],
        labels: Sequence[int],
    ) -> "WeightedDataset":
        return cls.weighted(domain, num_classes, points, labels, [1] * len(points))

    @classmethod
    def weighted(
        cls,
        domain: GridDomain,
        num_classes: int,
        points: Sequence[Sequence[int]],
        labels: Sequence[int],
        weights: Sequence[Any],
    ) -> "WeightedDataset":
        """Build a dataset, normalizing positive ``weights`` to sum to one."""

        if not len(points) == len(labels) == len(weights):
            raise ModelError("points, labels and weights must have equal length")
        raw = [Fraction(w) for w in weights]
        total = sum(raw)
        if total <= 0:
            raise ModelError("weights must be positive")
        entries = tuple(
            DatasetEntry(tuple(int(c) for c in p), int(y), w / total)
            for p, y, w in zip(points, labels, raw)
        )
        return cls(domain=domain, num_classes=num_classes, entries=entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class EvaluationMode(str, enum.Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower-bound"


@dataclass
class RiskReport:
    """The three risk functionals of one model on one dataset.

    Robust values range over lattice points of the domain only. ``mode`` is
    ``lower-bound`` when the robust value came from an attack rather than
    enumeration. The counters are example counts (not weights):
    ``clean_errors`` includes ``clean_rejections``, and ``adversarial_errors``
    counts examples that are correct when clean but fail inside the ball.
    """

    model_kind: str
    metric: str
    examples: int
    risk: Fraction
    eps: Optional[Fraction] = None
    robust_risk: Optional[Fraction] = None
    robust_risk_det: Optional[Fraction] = None
    mode: EvaluationMode = EvaluationMode.EXACT
    clean_errors: int = 0
    clean_rejections: int = 0
    adversarial_errors: int = 0
    union_bound: Optional[Fraction] = None

    def __post_init__(self) -> None:
        for name in ("risk", "robust_risk", "robust_risk_det", "union_bound"):
            value = getattr(self, name)
            if value is not None and not 0 <= value <= 1:
                raise ValueError(f"{name}={value} outside [0, 1]")


class AuditFlag(str, enum.Enum):
    EXCEEDS_SOTA = "ExceedsSota"
    WITHIN_SOTA = "WithinSota"
    NO_BASELINE = "NoBaseline"


@dataclass(frozen=True)
class ClaimRecord:
    """A published detector defense's reported numbers at detector radius ``eps``.

    Exactly one form is present: the ``(fpr, fnr, clean_risk)`` triple, or a
    directly reported ``robust_acc_det``. Records with neither are kept as
    not derivable (for example AUC-only reporting) and skipped by the auditor.
    """

    defense: str
    dataset: str
    norm: str
    eps: Fraction
    fpr: Optional[Fraction] = None
    fnr: Optional[Fraction] = None
    clean_risk: Optional[Fraction] = None
    robust_acc_det: Optional[Fraction] = None
    source: str = ""
    derivable: bool = True

    @property
    def key(self) -> Tuple[str, str, str, Fraction]:
        return (self.defense, self.dataset, self.norm, self.eps)

    @property
    def has_triple(self) -> bool:
        return self.fpr is not None


@dataclass(frozen=True)
class SotaRecord:
    """Best published robust classification accuracy at ``eps_half``."""

    dataset: str
    norm: str
    eps_half: Fraction
    robust_acc: Fraction
    citation: str = ""

    @property
    def key(self) -> Tuple[str, str, Fraction]:
        return (self.dataset, self.norm, self.eps_half)


class AuditSummary(NamedTuple):
    """Rendered fields of an audit row, as recovered from a CSV report."""

    dataset: str
    defense: str
    norm: str
    eps: Fraction
    claimed: Fraction
    eps_half: Fraction
    sota: Optional[Fraction]
    flag: AuditFlag


@dataclass(frozen=True)
class AuditRow:
    """One claim contrasted with the classifier accuracy it implies."""

    claim: ClaimRecord
    implied_accuracy: Fraction
    sota: Optional[SotaRecord]
    flag: AuditFlag

    @property
    def implied_eps(self) -> Fraction:
        return self.claim.eps / 2

    def summary(self) -> AuditSummary:
        return AuditSummary(
            dataset=self.claim.dataset,
            defense=self.claim.defense,
            norm=self.claim.norm,
            eps=self.claim.eps,
            claimed=self.implied_accuracy,
            eps_half=self.implied_eps,
            sota=self.sota.robust_acc if self.sota else None,
            flag=self.flag,
        )


@dataclass(frozen=True)
class PairCheck:
    """Gap between a certified detector and the classifier it is paired with."""

    clf_acc: Fraction
    det_acc: Fraction
    gap: Fraction
    band: Fraction
    within_band: bool
    clf_eps: Optional[Fraction] = None
    det_eps: Optional[Fraction] = None


@dataclass
class ResourceArtifact:
    """Resource usage observed while a batch ran."""

    monitor: str
    timestamp: str
    metrics: Dict[str, Any]


@dataclass
class Violation:
    """A property that failed on one generated instance."""

    instance_index: int
    instance_seed: int
    prop: str
    evidence: Dict[str, str]
    reproducer: Optional[str] = None


@dataclass
class SuiteExecution:
    """Timing and counts captured by the suite runner."""

    instances: int
    checks: int
    started_at: datetime
    finished_at: datetime

    @property
    def seconds(self) -> float:
        return (self.finished_at - self.started_at).total_seconds()


@dataclass
class VerificationSession:
    """Full output of one property-suite run."""

    profile: str
    seed: int
    execution: SuiteExecution
    artifacts: List[ResourceArtifact]
    violations: List[Violation] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


def weight_of(entries: Iterable[DatasetEntry]) -> Fraction:
    return sum((entry.weight for entry in entries), Fraction(0))

"""Configuration shared by the detector/classifier reductions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Any, Dict

from ..geometry.domain import GridDomain
from ..geometry.enumeration import DEFAULT_BUDGET
from ..geometry.metrics import Metric, ScaledDistance, metric_from_dict


class FallbackPolicy(str, enum.Enum):
    """What the detector-to-classifier reduction answers when every point of
    the half-radius ball is rejected."""

    WORST_CASE = "worst-case"
    SEEDED_RANDOM = "seeded-random"


@dataclass(frozen=True)
class ReductionConfig:
    """Radius and search settings of a reduction.

    ``eps`` is always the detector-side radius; reductions search balls of
    radius ``eps / 2``, derived here so callers cannot get the factor wrong.
    ``skip_ball_search`` disables the ball search and exists only so the
    property suite can check that it notices a broken reduction.
    """

    metric: Metric
    eps: ScaledDistance
    domain: GridDomain
    fallback_seed: int = 0
    fallback_policy: FallbackPolicy = FallbackPolicy.WORST_CASE
    budget: int = DEFAULT_BUDGET
    memoize: bool = False
    skip_ball_search: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", ScaledDistance.of(self.eps))
        object.__setattr__(self, "fallback_policy", FallbackPolicy(self.fallback_policy))
        if self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")

    @property
    def half_radius(self) -> ScaledDistance:
        return self.eps.half()

    def with_eps(self, eps: Any) -> "ReductionConfig":
        return replace(self, eps=ScaledDistance.of(eps))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "metric": self.metric.to_dict(),
            "eps": str(self.eps.value),
            "domain": self.domain.to_dict(),
            "fallback_seed": self.fallback_seed,
            "fallback_policy": self.fallback_policy.value,
            "budget": self.budget,
            "memoize": self.memoize,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "ReductionConfig":
        return cls(
            metric=metric_from_dict(payload["metric"]),
            eps=ScaledDistance.parse(str(payload["eps"])),
            domain=GridDomain.from_dict(payload["domain"]),
            fallback_seed=int(payload.get("fallback_seed", 0)),
            fallback_policy=FallbackPolicy(payload.get("fallback_policy", "worst-case")),
            budget=int(payload.get("budget", DEFAULT_BUDGET)),
            memoize=bool(payload.get("memoize", False)),
        )

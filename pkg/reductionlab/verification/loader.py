"""
Property-suite profile loading.

Profiles are defined declaratively in YAML, never hardcoded in logic.
"""

from __future__ import annotations

import pathlib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import yaml

from ..errors import FormatError

DEFAULT_PROFILES = pathlib.Path(__file__).resolve().parent / "profiles.yaml"
PROPERTIES = ("det_to_clf", "clf_to_det", "union_bound", "seeded_fallback", "round_trip")
SUITE_METRICS = ("linf", "l1")


@dataclass(frozen=True)
class SuiteProfile:
    """Shape of the random instances one property-suite run generates."""

    name: str
    instances: int
    dims: int
    min_side: int
    max_side: int
    class_counts: Tuple[int, ...]
    radii: Tuple[int, ...]
    metrics: Tuple[str, ...]
    reject_rates: Tuple[Fraction, ...]
    dataset_size: int
    properties: Tuple[str, ...]

    def __post_init__(self) -> None:
        checks = (
            (self.instances >= 1, "instances must be positive"),
            (self.dims >= 1, "dims must be positive"),
            (1 <= self.min_side <= self.max_side, "need 1 <= min_side <= max_side"),
            (bool(self.class_counts) and min(self.class_counts) >= 2, "class counts must be at least 2"),
            (bool(self.radii) and all(r >= 0 and r % 2 == 0 for r in self.radii), "radii must be even and nonnegative"),
            (bool(self.metrics) and set(self.metrics) <= set(SUITE_METRICS), f"metrics must be among {SUITE_METRICS}"),
            (bool(self.reject_rates) and all(0 <= r <= 1 for r in self.reject_rates), "reject rates must lie in [0, 1]"),
            (self.dataset_size >= 1, "dataset_size must be positive"),
            (bool(self.properties) and set(self.properties) <= set(PROPERTIES), f"properties must be among {PROPERTIES}"),
        )
        for ok, message in checks:
            if not ok:
                raise FormatError(message, source=f"profile {self.name}")

    def scaled(self, instances: Optional[int] = None, max_side: Optional[int] = None) -> "SuiteProfile":
        """Copy with command-line overrides applied."""

        changes: Dict[str, Any] = {}
        if instances is not None:
            changes["instances"] = instances
        if max_side is not None:
            changes["max_side"] = max_side
            changes["min_side"] = min(self.min_side, max_side)
        return replace(self, **changes)


def _profile(name: str, entry: Any, source: str) -> SuiteProfile:
    if not isinstance(entry, dict):
        raise FormatError("profile must be a mapping", source=source, field=name)
    try:
        return SuiteProfile(
            name=name,
            instances=int(entry["instances"]),
            dims=int(entry.get("dims", 2)),
            min_side=int(entry.get("min_side", 2)),
            max_side=int(entry["max_side"]),
            class_counts=tuple(int(c) for c in entry["class_counts"]),
            radii=tuple(int(r) for r in entry["radii"]),
            metrics=tuple(str(m).lower() for m in entry["metrics"]),
            reject_rates=tuple(Fraction(str(r)) for r in entry.get("reject_rates", ["3/10"])),
            dataset_size=int(entry.get("dataset_size", 8)),
            properties=tuple(str(p) for p in entry.get("properties", PROPERTIES[:3])),
        )
    except FormatError:
        raise
    except KeyError as exc:
        raise FormatError("key is required", source=source, field=f"{name}.{exc.args[0]}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"invalid profile {name}: {exc}", source=source) from None


def load_profiles(path: pathlib.Path = DEFAULT_PROFILES) -> Dict[str, SuiteProfile]:
    path = pathlib.Path(path)
    with path.open("r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    if not isinstance(data, dict):
        raise FormatError("profile file must map names to profiles", source=path.name)
    return {str(name): _profile(str(name), entry, path.name) for name, entry in data.items()}


def load_profile(name: str = "default", path: pathlib.Path = DEFAULT_PROFILES) -> SuiteProfile:
    profiles = load_profiles(path)
    if name not in profiles:
        raise FormatError(f"unknown profile {name!r}; available: {', '.join(sorted(profiles))}", source=pathlib.Path(path).name)
    return profiles[name]

"""
Exact metrics on integer lattices.

Distances between lattice points are integers; radii are rationals so that
``eps / 2`` stays exact. The Euclidean metric is carried in squared form and
compared against squared radii, which keeps every comparison in exact
arithmetic.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Optional, Sequence, Tuple, Type, Union

from ..errors import DimensionMismatchError, FormatError, ModelError

Rational = Union[int, Fraction]


@total_ordering
@dataclass(frozen=True, eq=False)
class ScaledDistance:
    """Non-negative rational distance.

    ``squared`` marks a value that is the square of the Euclidean distance.
    Comparisons between squared and plain values square the plain side, which
    is order preserving on non-negative numbers.
    """

    value: Fraction
    squared: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise ValueError(f"distances are non-negative, got {self.value}")

    @classmethod
    def of(cls, value: Union[Rational, str, "ScaledDistance"]) -> "ScaledDistance":
        if isinstance(value, ScaledDistance):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(Fraction(value))

    @classmethod
    def parse(cls, text: str) -> "ScaledDistance":
        """Parse ``"N/D"``, ``"N"`` or a decimal such as ``"2.9"`` exactly."""

        try:
            return cls(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"cannot parse distance {text!r}: {exc}") from exc

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    @property
    def squared_value(self) -> Fraction:
        return self.value if self.squared else self.value * self.value

    def half(self) -> "ScaledDistance":
        """Exactly half the distance; a squared value shrinks by four."""

        if self.squared:
            return ScaledDistance(self.value / 4, squared=True)
        return ScaledDistance(self.value / 2)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScaledDistance):
            return NotImplemented
        if self.squared == other.squared:
            return self.value == other.value
        return self.squared_value == other.squared_value

    def __lt__(self, other: "ScaledDistance") -> bool:
        if self.squared == other.squared:
            return self.value < other.value
        return self.squared_value < other.squared_value

    def __hash__(self) -> int:
        return hash(self.squared_value)

    def __str__(self) -> str:
        text = str(self.value)
        return f"{text} (squared)" if self.squared else text


class Metric(ABC):
    """Metric on integer points.

    ``raw`` is the distance in the metric's native units (squared for L2);
    ``bound`` converts a radius into the same units so membership tests are a
    single exact comparison.
    """

    tag: str = ""
    squared: bool = False

    @abstractmethod
    def raw(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Distance in native units, without dimension checks."""

    @abstractmethod
    def reach(self, bound: Fraction, axis: int, extent: int) -> int:
        """Largest ``|a[axis] - b[axis]|`` compatible with ``raw(a, b) <= bound``."""

    def bound(self, radius: ScaledDistance) -> Fraction:
        return radius.squared_value if self.squared else radius.value

    def distance(self, a: Sequence[int], b: Sequence[int]) -> ScaledDistance:
        if len(a) != len(b):
            raise DimensionMismatchError(f"points of length {len(a)} and {len(b)}")
        self._check_dims(len(a))
        return ScaledDistance(Fraction(self.raw(a, b)), squared=self.squared)

    def within(self, a: Sequence[int], b: Sequence[int], radius: ScaledDistance) -> bool:
        return self.raw(a, b) <= self.bound(radius)

    def triangle_holds(self, ab: int, bc: int, ac: int) -> bool:
        return ac <= ab + bc

    def _check_dims(self, dims: int) -> None:
        """Hook for metrics tied to a dimension."""

    def to_dict(self) -> Dict[str, object]:
        return {"tag": self.tag}


@dataclass(frozen=True)
class LInf(Metric):
    tag = "linf"

    def raw(self, a: Sequence[int], b: Sequence[int]) -> int:
        return max(abs(x - y) for x, y in zip(a, b))

    def reach(self, bound: Fraction, axis: int, extent: int) -> int:
        return min(math.floor(bound), extent - 1)


@dataclass(frozen=True)
class L1(Metric):
    tag = "l1"

    def raw(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum(abs(x - y) for x, y in zip(a, b))

    def reach(self, bound: Fraction, axis: int, extent: int) -> int:
        return min(math.floor(bound), extent - 1)


@dataclass(frozen=True)
class L2Squared(Metric):
    tag = "l2"
    squared = True

    def raw(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum((x - y) * (x - y) for x, y in zip(a, b))

    def reach(self, bound: Fraction, axis: int, extent: int) -> int:
        return min(math.isqrt(math.floor(bound)), extent - 1)

    def triangle_holds(self, ab: int, bc: int, ac: int) -> bool:
        # sqrt(ac) <= sqrt(ab) + sqrt(bc), squared out without irrationals
        slack = ac - ab - bc
        return slack <= 0 or slack * slack <= 4 * ab * bc


@dataclass(frozen=True)
class WeightedHamming(Metric):
    """Sum of ``weights[i]`` over the coordinates where two points differ."""

    weights: Tuple[int, ...] = ()
    tag = "hamming"

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights:
            raise ModelError("weighted Hamming metric needs one weight per coordinate")
        if any(w <= 0 for w in self.weights):
            raise ModelError(f"Hamming weights must be positive, got {self.weights}")

    def raw(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum(w for x, y, w in zip(a, b, self.weights) if x != y)

    def reach(self, bound: Fraction, axis: int, extent: int) -> int:
        return extent - 1 if self.weights[axis] <= bound else 0

    def _check_dims(self, dims: int) -> None:
        if dims != len(self.weights):
            raise DimensionMismatchError(
                f"Hamming metric has {len(self.weights)} weights, points have {dims} coordinates"
            )

    def to_dict(self) -> Dict[str, object]:
        return {"tag": self.tag, "weights": list(self.weights)}


LINF = LInf()
L1_METRIC = L1()
L2 = L2Squared()

_SIMPLE_METRICS: Dict[str, Type[Metric]] = {"linf": LInf, "l1": L1, "l2": L2Squared}
METRIC_TAGS = ("linf", "l1", "l2", "hamming")


def metric_from_tag(
    tag: str, dims: Optional[int] = None, weights: Optional[Sequence[int]] = None
) -> Metric:
    """Build a metric from its command-line tag.

    ``hamming`` uses ``weights`` when given, otherwise unit weights over
    ``dims`` coordinates.
    """

    tag = tag.strip().lower()
    if tag in _SIMPLE_METRICS:
        return _SIMPLE_METRICS[tag]()
    if tag == "hamming":
        if weights is None:
            if dims is None:
                raise ModelError("hamming metric needs weights or a dimension")
            weights = (1,) * dims
        return WeightedHamming(tuple(weights))
    raise FormatError(f"unknown metric {tag!r}; expected one of {', '.join(METRIC_TAGS)}")


def metric_from_dict(payload: Dict[str, object]) -> Metric:
    tag = str(payload.get("tag", ""))
    weights = payload.get("weights")
    return metric_from_tag(tag, weights=weights)  # type: ignore[arg-type]

"""
Nearest-first enumeration of lattice balls.

Balls are scanned inside the bounding box given by each metric's per-axis
reach, clipped to the domain. Output order is increasing distance, ties broken
lexicographically on coordinates, so the center always comes first and reruns
produce identical sequences.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from ..errors import BudgetExceededError
from .domain import GridDomain, Point
from .metrics import Metric, ScaledDistance

DEFAULT_BUDGET = 10**8

# Offset tables larger than this are not cached; they are scanned per call.
_OFFSET_CACHE_LIMIT = 1 << 16


def ball_points(
    domain: GridDomain,
    metric: Metric,
    center: Sequence[int],
    radius: ScaledDistance,
    budget: int = DEFAULT_BUDGET,
) -> List[Point]:
    """All domain points within ``radius`` of ``center``, nearest first."""

    return list(iter_ball(domain, metric, center, radius, budget))


def iter_ball(
    domain: GridDomain,
    metric: Metric,
    center: Sequence[int],
    radius: ScaledDistance,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[Point]:
    """Lazy form of :func:`ball_points`.

    Validation and the budget check happen before the iterator is returned, so
    callers see :class:`BudgetExceededError` at call time rather than midway.
    """

    center = domain.check(center)
    metric.distance(center, center)
    radius = ScaledDistance.of(radius)
    bound = metric.bound(radius)
    reaches = _reaches(domain, metric, bound)
    clipped = _clip(domain, center, reaches)
    candidates = math.prod(high - low + 1 for low, high in clipped)
    if candidates > budget:
        raise BudgetExceededError(candidates, budget)

    if math.prod(2 * r + 1 for r in reaches) <= _OFFSET_CACHE_LIMIT:
        offsets = _sorted_offsets(metric, bound, reaches)
        return _shift_offsets(domain, center, offsets)
    return iter(_scan_box(metric, center, bound, clipped))


def ball_size(
    domain: GridDomain,
    metric: Metric,
    center: Sequence[int],
    radius: ScaledDistance,
    budget: int = DEFAULT_BUDGET,
) -> int:
    return sum(1 for _ in iter_ball(domain, metric, center, radius, budget))


def bounding_box(
    domain: GridDomain, metric: Metric, center: Point, radius: ScaledDistance
) -> List[Tuple[int, int]]:
    """Per-axis ``(low, high)`` range that contains every ball point."""

    return _clip(domain, center, _reaches(domain, metric, metric.bound(radius)))


def _reaches(domain: GridDomain, metric: Metric, bound: Fraction) -> Tuple[int, ...]:
    return tuple(metric.reach(bound, axis, extent) for axis, extent in enumerate(domain.extents))


def _clip(domain: GridDomain, center: Point, reaches: Tuple[int, ...]) -> List[Tuple[int, int]]:
    return [
        (max(low, c - r), min(high, c + r))
        for c, r, low, high in zip(center, reaches, domain.lo, domain.hi)
    ]


@lru_cache(maxsize=512)
def _sorted_offsets(
    metric: Metric, bound: Fraction, reaches: Tuple[int, ...]
) -> Tuple[Tuple[int, ...], ...]:
    origin = (0,) * len(reaches)
    keyed = []
    for offset in itertools.product(*(range(-r, r + 1) for r in reaches)):
        raw = metric.raw(origin, offset)
        if raw <= bound:
            keyed.append((raw, offset))
    # translation preserves lexicographic order, so offsets sort like points
    keyed.sort()
    return tuple(offset for _, offset in keyed)


def _shift_offsets(
    domain: GridDomain, center: Point, offsets: Tuple[Tuple[int, ...], ...]
) -> Iterator[Point]:
    lo, hi = domain.lo, domain.hi
    for offset in offsets:
        point = tuple(c + o for c, o in zip(center, offset))
        if all(low <= v <= high for v, low, high in zip(point, lo, hi)):
            yield point


def _scan_box(
    metric: Metric, center: Point, bound: Fraction, clipped: List[Tuple[int, int]]
) -> List[Point]:
    keyed = []
    for point in itertools.product(*(range(low, high + 1) for low, high in clipped)):
        raw = metric.raw(center, point)
        if raw <= bound:
            keyed.append((raw, point))
    keyed.sort()
    return [point for _, point in keyed]

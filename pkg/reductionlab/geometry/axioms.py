"""
Sampled checks of the metric axioms, and the lattice midpoint witness.

Both reductions lean on the triangle inequality; ``verify_metric_axioms``
guards that assumption for any :class:`Metric`, including user-defined ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import ModelError
from ..rng import make_rng
from .domain import GridDomain, Point
from .metrics import L1, LInf, Metric, ScaledDistance

Triple = Tuple[Point, Point, Point]


@dataclass
class AxiomReport:
    """Pass/fail per axiom over ``samples`` random triples."""

    metric: str
    samples: int
    symmetry: bool = True
    identity: bool = True
    triangle: bool = True
    violations: List[Tuple[str, Triple]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.symmetry and self.identity and self.triangle


def verify_metric_axioms(
    metric: Metric, domain: GridDomain, samples: int, seed: int
) -> AxiomReport:
    """Check symmetry, identity of indiscernibles and the triangle inequality.

    The first violating triple of each axiom is kept in ``violations``.
    """

    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    rng = make_rng(seed, "metric-axioms")
    lo = list(domain.lo)
    hi = [h + 1 for h in domain.hi]
    draws = rng.integers(lo, hi, size=(samples, 3, domain.dims))

    report = AxiomReport(metric=metric.tag or type(metric).__name__, samples=samples)
    for row in draws:
        a, b, c = (tuple(int(v) for v in point) for point in row)
        triple = (a, b, c)
        ab, ba = metric.raw(a, b), metric.raw(b, a)
        bc, ac = metric.raw(b, c), metric.raw(a, c)
        if ab != ba and report.symmetry:
            report.symmetry = False
            report.violations.append(("symmetry", triple))
        if (metric.raw(a, a) != 0 or (ab == 0) != (a == b)) and report.identity:
            report.identity = False
            report.violations.append(("identity", triple))
        if not metric.triangle_holds(ab, bc, ac) and report.triangle:
            report.triangle = False
            report.violations.append(("triangle", triple))
    return report


def midpoint(
    metric: Metric, x: Sequence[int], x_hat: Sequence[int], radius: ScaledDistance
) -> Optional[Point]:
    """Lattice point within ``radius`` of both ``x`` and ``x_hat``.

    Walks from ``x`` towards ``x_hat``. Exists whenever the two points are at
    most ``2 * radius`` apart and ``radius`` is an integer; returns ``None``
    otherwise. Only LInf and L1 are supported.
    """

    if not isinstance(metric, (LInf, L1)):
        raise ModelError(f"midpoint witness supports linf and l1, not {metric.tag}")
    if radius.squared or radius.value.denominator != 1:
        return None
    step = int(radius.value)
    if Fraction(metric.raw(x, x_hat)) > 2 * radius.value:
        return None
    if isinstance(metric, LInf):
        return tuple(a + max(-step, min(step, b - a)) for a, b in zip(x, x_hat))

    remaining = step
    coords = list(x)
    for axis, (a, b) in enumerate(zip(x, x_hat)):
        move = max(-remaining, min(remaining, b - a))
        coords[axis] = a + move
        remaining -= abs(move)
    return tuple(coords)

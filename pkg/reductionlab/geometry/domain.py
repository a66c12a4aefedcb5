"""
Bounded integer grid domains.

Every input the lab reasons about is a lattice point inside a box
``lo[i] <= x[i] <= hi[i]``. Points are plain tuples of ints so they hash,
compare lexicographically and stay immutable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from ..errors import DimensionMismatchError, DomainError

Point = Tuple[int, ...]

# Largest point count a domain may have; enumeration counts in 64 bits.
MAX_POINT_COUNT = 2**64 - 1


@dataclass(frozen=True)
class GridDomain:
    """Inclusive integer box ``[lo, hi]`` in ``len(lo)`` dimensions."""

    lo: Tuple[int, ...]
    hi: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise DimensionMismatchError(
                f"lo has {len(self.lo)} coordinates but hi has {len(self.hi)}"
            )
        if not self.lo:
            raise DomainError("a grid domain needs at least one dimension")
        for axis, (low, high) in enumerate(zip(self.lo, self.hi)):
            if low > high:
                raise DomainError(f"lo[{axis}]={low} exceeds hi[{axis}]={high}")
        if self.size > MAX_POINT_COUNT:
            raise DomainError(f"domain holds {self.size} points, more than a 64-bit count")

    @classmethod
    def box(cls, dims: int, lo: int, hi: int) -> "GridDomain":
        """Cube ``[lo, hi]^dims``."""

        if dims < 1:
            raise DomainError(f"dims must be positive, got {dims}")
        return cls(lo=(lo,) * dims, hi=(hi,) * dims)

    @property
    def dims(self) -> int:
        return len(self.lo)

    @property
    def extents(self) -> Tuple[int, ...]:
        return tuple(high - low + 1 for low, high in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        return math.prod(high - low + 1 for low, high in zip(self.lo, self.hi))

    def contains(self, point: Sequence[int]) -> bool:
        if len(point) != self.dims:
            return False
        return all(low <= c <= high for c, low, high in zip(point, self.lo, self.hi))

    def check(self, point: Sequence[int]) -> Point:
        """Return ``point`` as a tuple, raising if it is not a domain point."""

        if len(point) != self.dims:
            raise DimensionMismatchError(
                f"point has {len(point)} coordinates, domain has {self.dims}"
            )
        as_tuple = tuple(int(c) for c in point)
        if not self.contains(as_tuple):
            raise DomainError(f"point {as_tuple} lies outside {self.lo}..{self.hi}")
        return as_tuple

    def points(self) -> Iterator[Point]:
        """All domain points in lexicographic order."""

        ranges = [range(low, high + 1) for low, high in zip(self.lo, self.hi)]
        return itertools.product(*ranges)

    def index_of(self, point: Point) -> int:
        """Position of ``point`` in :meth:`points` order (mixed radix)."""

        index = 0
        for c, low, extent in zip(point, self.lo, self.extents):
            index = index * extent + (c - low)
        return index

    def point_at(self, index: int) -> Point:
        if not 0 <= index < self.size:
            raise DomainError(f"index {index} outside [0, {self.size})")
        coords = []
        for low, extent in zip(reversed(self.lo), reversed(self.extents)):
            index, offset = divmod(index, extent)
            coords.append(low + offset)
        return tuple(reversed(coords))

    def clamp(self, coords: Sequence[int]) -> Point:
        return tuple(
            min(max(int(c), low), high) for c, low, high in zip(coords, self.lo, self.hi)
        )

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_dict(cls, payload: dict) -> "GridDomain":
        return cls(lo=tuple(int(v) for v in payload["lo"]), hi=tuple(int(v) for v in payload["hi"]))

"""
Two-class Gaussian task on a lattice.

Class ``y`` in {0, 1} is drawn from ``N((2y - 1) * mu, sigma^2 I)``, rounded to
the nearest lattice point (half to even) and clamped into the domain. Labels
alternate so the classes stay balanced; all weights are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from ..errors import DimensionMismatchError, ModelError
from ..geometry.domain import GridDomain
from ..models import WeightedDataset
from ..rng import make_rng

Number = Union[int, str, Fraction]


def gen_gaussian_task(
    n: int,
    mu: Sequence[Number],
    sigma: Number,
    count: int,
    seed: int,
    domain: GridDomain,
) -> WeightedDataset:
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    sigma_value = float(Fraction(sigma))
    if sigma_value <= 0:
        raise ModelError(f"sigma must be positive, got {sigma}")
    if len(mu) != n or domain.dims != n:
        raise DimensionMismatchError(
            f"n={n}, mu has {len(mu)} coordinates, domain has {domain.dims}"
        )

    rng = make_rng(seed, "gaussian-task")
    mean = np.array([float(Fraction(m)) for m in mu])
    labels = np.arange(count) % 2
    signs = (2 * labels - 1)[:, None]
    samples = signs * mean + sigma_value * rng.standard_normal((count, n))
    quantized = np.clip(np.rint(samples), domain.lo, domain.hi).astype(np.int64)
    return WeightedDataset.uniform(domain, 2, quantized.tolist(), labels.tolist())

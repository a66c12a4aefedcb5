"""
Closed-form bounds: the union bound on robust risk with detection, and the
robust accuracy of a linear classifier on the symmetric Gaussian task.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import ModelError
from ..rng import make_rng

Number = Union[int, float, str, Fraction]


def as_fraction(value: Number) -> Fraction:
    """Exact rational; floats are read through their shortest decimal repr."""

    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def union_bound(fpr: Number, fnr: Number, clean_risk: Number) -> Fraction:
    """``min(1, fpr + fnr + clean_risk)``, an upper bound on robust risk with detection."""

    values = {"fpr": as_fraction(fpr), "fnr": as_fraction(fnr), "clean_risk": as_fraction(clean_risk)}
    for name, value in values.items():
        if not 0 <= value <= 1:
            raise ValueError(f"{name}={value} outside [0, 1]")
    return min(Fraction(1), sum(values.values(), Fraction(0)))


def normal_cdf(z: float) -> float:
    """Standard normal CDF, ``erfc(-z / sqrt(2)) / 2`` via ``math.erfc``."""

    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _check_gaussian(w: Sequence[Number], mu: Sequence[Number], sigma: Number) -> Tuple[np.ndarray, np.ndarray, float]:
    w_arr = np.array([float(Fraction(v)) for v in w])
    mu_arr = np.array([float(Fraction(v)) for v in mu])
    if w_arr.shape != mu_arr.shape:
        raise ModelError(f"w has {w_arr.size} coordinates, mu has {mu_arr.size}")
    if not np.any(w_arr):
        raise ModelError("w must be non-zero")
    sigma_value = float(Fraction(sigma))
    if sigma_value <= 0:
        raise ModelError(f"sigma must be positive, got {sigma}")
    return w_arr, mu_arr, sigma_value


def analytic_gaussian_linear_robust_accuracy(
    w: Sequence[Number], mu: Sequence[Number], sigma: Number, eps: Number
) -> float:
    """Robust accuracy of ``sign(<w, x>)`` against LInf perturbations of size ``eps``.

    Data: ``y`` uniform on {-1, +1}, ``x ~ N(y * mu, sigma^2 I)``. The worst
    perturbation is ``-eps * y * sign(w)``, giving
    ``Phi((<w, mu> - eps * |w|_1) / (sigma * |w|_2))``.
    """

    w_arr, mu_arr, sigma_value = _check_gaussian(w, mu, sigma)
    margin = float(w_arr @ mu_arr) - float(Fraction(eps)) * float(np.abs(w_arr).sum())
    return normal_cdf(margin / (sigma_value * float(np.linalg.norm(w_arr))))


def monte_carlo_gaussian_linear_robust_accuracy(
    w: Sequence[Number],
    mu: Sequence[Number],
    sigma: Number,
    eps: Number,
    samples: int,
    seed: int,
) -> Tuple[float, float]:
    """Sampled robust accuracy under the worst-case perturbation, with its standard error."""

    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    w_arr, mu_arr, sigma_value = _check_gaussian(w, mu, sigma)
    rng = make_rng(seed, "gaussian-monte-carlo")
    y = rng.choice(np.array([-1.0, 1.0]), size=samples)
    x = y[:, None] * mu_arr + sigma_value * rng.standard_normal((samples, w_arr.size))
    x_adv = x - float(Fraction(eps)) * y[:, None] * np.sign(w_arr)
    correct = (y * (x_adv @ w_arr)) > 0
    estimate = float(correct.mean())
    stderr = math.sqrt(max(estimate * (1.0 - estimate), 1e-12) / samples)
    return estimate, stderr

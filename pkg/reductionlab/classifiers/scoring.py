"""
Score-based classifiers: a linear sign rule and a tiny ReLU network.

All arithmetic is exact. The network stores its weights as ``Fraction``
objects in numpy object arrays, so matrix products stay rational and argmax
ties are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, ModelError
from ..geometry.domain import GridDomain, Point
from .base import ScoringClassifier


class LinearClassifier(ScoringClassifier):
    """Two-class sign rule: label 1 iff ``<w, x> + b > 0``.

    Class scores are ``(-s, s)`` with ``s = <w, x> + b``, so the top score is
    ``|s|`` and a zero margin falls to class 0.
    """

    kind = "linear"

    def __init__(self, domain: GridDomain, weights: Sequence[int], bias: Fraction) -> None:
        super().__init__(domain, num_classes=2)
        if len(weights) != domain.dims:
            raise DimensionMismatchError(
                f"{len(weights)} weights for a {domain.dims}-dimensional domain"
            )
        self.weights: Tuple[int, ...] = tuple(int(w) for w in weights)
        self.bias = Fraction(bias)

    def margin(self, point: Point) -> Fraction:
        return sum((w * c for w, c in zip(self.weights, point)), self.bias)

    def scores(self, point: Point) -> Sequence[Fraction]:
        self._require(point)
        s = self.margin(point)
        return (-s, s)


@dataclass(frozen=True)
class DenseLayer:
    """Affine layer ``W x + b`` with ``W`` of shape (outputs, inputs)."""

    weights: Tuple[Tuple[Fraction, ...], ...]
    bias: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.weights)
        object.__setattr__(self, "weights", rows)
        object.__setattr__(self, "bias", tuple(Fraction(v) for v in self.bias))
        if not rows or len(rows) != len(self.bias):
            raise ModelError(f"layer has {len(rows)} weight rows and {len(self.bias)} biases")
        width = len(rows[0])
        if width == 0 or any(len(row) != width for row in rows):
            raise ModelError("layer weight rows must share one positive length")

    @property
    def inputs(self) -> int:
        return len(self.weights[0])

    @property
    def outputs(self) -> int:
        return len(self.weights)

    def matrix(self) -> np.ndarray:
        return np.array(self.weights, dtype=object)

    def vector(self) -> np.ndarray:
        return np.array(self.bias, dtype=object)


class TinyMLP(ScoringClassifier):
    """Fully connected ReLU network; the last layer's outputs are the logits."""

    kind = "tiny_mlp"

    def __init__(self, domain: GridDomain, layers: Sequence[DenseLayer]) -> None:
        if not layers:
            raise ModelError("a network needs at least one layer")
        if layers[0].inputs != domain.dims:
            raise DimensionMismatchError(
                f"first layer takes {layers[0].inputs} inputs, domain has {domain.dims} coordinates"
            )
        for previous, layer in zip(layers, layers[1:]):
            if layer.inputs != previous.outputs:
                raise ModelError(
                    f"layer expects {layer.inputs} inputs but previous layer has {previous.outputs} outputs"
                )
        super().__init__(domain, num_classes=layers[-1].outputs)
        self.layers: Tuple[DenseLayer, ...] = tuple(layers)
        self._affine: List[Tuple[np.ndarray, np.ndarray]] = [
            (layer.matrix(), layer.vector()) for layer in self.layers
        ]

    @property
    def affine(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return self._affine

    def scores(self, point: Point) -> Sequence[Fraction]:
        self._require(point)
        h = np.array(point, dtype=object)
        last = len(self._affine) - 1
        for index, (w, b) in enumerate(self._affine):
            h = w.dot(h) + b
            if index < last:
                h = np.maximum(h, 0)
        return tuple(Fraction(v) for v in h)


def build_tiny_mlp(
    domain: GridDomain,
    layers: Sequence[Tuple[Sequence[Sequence[object]], Sequence[object]]],
) -> TinyMLP:
    """Network from ``(weights, bias)`` pairs; entries may be ints, strings or Fractions."""

    return TinyMLP(
        domain,
        [
            DenseLayer(
                weights=tuple(tuple(Fraction(v) for v in row) for row in w),
                bias=tuple(Fraction(v) for v in b),
            )
            for w, b in layers
        ],
    )

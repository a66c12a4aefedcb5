"""
Deterministic random streams.

Every random draw in the lab comes from numpy's Philox4x64-10 counter-based
bit generator, seeded through a ``SeedSequence`` whose spawn key names the
purpose of the stream (and, for per-point streams, the point itself). The
algorithm is fixed and documented by numpy, so datasets can be reproduced
outside Python.
"""

from __future__ import annotations

import hashlib
from typing import Union

import numpy as np

Key = Union[int, str]


def _zigzag(value: int) -> int:
    return 2 * value if value >= 0 else -2 * value - 1


def _key_to_int(key: Key) -> int:
    if isinstance(key, str):
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    return _zigzag(int(key))


def make_rng(seed: int, *keys: Key) -> np.random.Generator:
    """Philox generator for ``seed`` and the stream path ``keys``."""

    sequence = np.random.SeedSequence(
        _zigzag(int(seed)), spawn_key=tuple(_key_to_int(k) for k in keys)
    )
    return np.random.Generator(np.random.Philox(sequence))

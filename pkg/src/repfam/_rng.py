"""Seeded random streams.

Every randomized construction asks for a stream keyed by the run seed plus a
tuple of labels, so that independent components never share draws and the
whole run is a function of one integer.
"""
from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np


def _label_word(label) -> int:
    if isinstance(label, int):
        return label & 0xFFFFFFFF
    return zlib.crc32(str(label).encode())


def stream(seed: int, *labels) -> np.random.Generator:
    """Philox generator keyed by ``seed`` and ``labels``."""
    words = [seed & 0xFFFFFFFF, (seed >> 32) & 0xFFFFFFFF]
    words.extend(_label_word(lab) for lab in labels)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


def threshold64(x: Fraction) -> int:
    """Fixed-point threshold so that ``u < threshold64(x)`` has probability x."""
    return (x.numerator << 64) // x.denominator


def bernoulli_masks(rng: np.random.Generator, count: int, n: int, x: Fraction) -> np.ndarray:
    """``count`` random subsets of range(n) as uint64 masks, each element kept with prob. x."""
    thr = np.uint64(min(threshold64(x), 2**64 - 1))
    draws = rng.integers(0, 2**64, size=(count, n), dtype=np.uint64, endpoint=False)
    bits = (draws < thr).astype(np.uint64)
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    return (bits * weights).sum(axis=1, dtype=np.uint64) if n else np.zeros(count, dtype=np.uint64)

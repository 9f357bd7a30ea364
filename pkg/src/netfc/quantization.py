"""Uniform midpoint quantizers and discrete source alphabets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BitsOutOfRangeError, InvalidRangeError, LevelOutOfRangeError

MAX_BITS = 16


@dataclass(frozen=True)
class Quantizer:
    """``2**bits`` equal-width bins over ``[lo, hi)``.

    Values outside the interval saturate to the first or last bin.
    """

    lo: float
    hi: float
    bits: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise InvalidRangeError(f"need lo < hi, got [{self.lo}, {self.hi})")
        if not isinstance(self.bits, (int, np.integer)) or not 1 <= self.bits <= MAX_BITS:
            raise BitsOutOfRangeError(f"bits must be in [1, {MAX_BITS}], got {self.bits!r}")

    @property
    def levels(self) -> int:
        return 1 << int(self.bits)

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / self.levels

    def midpoints(self) -> np.ndarray:
        return self.lo + (np.arange(self.levels) + 0.5) * self.step

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "bits": int(self.bits)}

    @classmethod
    def from_dict(cls, d: dict) -> "Quantizer":
        return cls(float(d["lo"]), float(d["hi"]), int(d["bits"]))


def build_quantizer(lo: float, hi: float, bits: int) -> Quantizer:
    return Quantizer(float(lo), float(hi), int(bits))


def quantize(q: Quantizer, v: float) -> int:
    """Level index of ``v``; never raises for finite input."""
    if v < q.lo:
        return 0
    if v >= q.hi:
        return q.levels - 1
    # float rounding can land exactly on `levels` just below hi
    return min(int(math.floor((v - q.lo) / q.step)), q.levels - 1)


def quantize_array(q: Quantizer, v) -> np.ndarray:
    """Vectorized :func:`quantize`, identical results element-wise."""
    v = np.asarray(v, dtype=float)
    idx = np.floor((v - q.lo) / q.step)
    idx = np.where(v < q.lo, 0, np.where(v >= q.hi, q.levels - 1, idx))
    return np.minimum(idx, q.levels - 1).astype(np.int64)


def dequantize(q: Quantizer, level: int) -> float:
    if not 0 <= level < q.levels:
        raise LevelOutOfRangeError(f"level {level} outside [0, {q.levels - 1}]")
    return q.lo + (level + 0.5) * q.step


def dequantize_array(q: Quantizer, levels) -> np.ndarray:
    levels = np.asarray(levels)
    if levels.size and (levels.min() < 0 or levels.max() >= q.levels):
        raise LevelOutOfRangeError(f"levels outside [0, {q.levels - 1}]")
    return q.lo + (levels + 0.5) * q.step


@dataclass(frozen=True)
class Alphabet:
    """Ordered representative values of a discrete source and their probabilities."""

    symbols: np.ndarray
    probabilities: np.ndarray = field(default=None)

    def __post_init__(self):
        symbols = np.asarray(self.symbols, dtype=float)
        if symbols.ndim != 1 or symbols.size == 0:
            raise ValueError("alphabet needs a non-empty 1-D symbol list")
        if self.probabilities is None:
            probs = np.full(symbols.size, 1.0 / symbols.size)
        else:
            probs = np.asarray(self.probabilities, dtype=float)
        if probs.shape != symbols.shape:
            raise ValueError("symbols and probabilities differ in length")
        if (probs < 0).any() or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "probabilities", probs)

    def __len__(self) -> int:
        return int(self.symbols.size)

    @classmethod
    def uniform(cls, symbols) -> "Alphabet":
        return cls(np.asarray(symbols, dtype=float))

    @classmethod
    def from_quantizer(cls, q: Quantizer) -> "Alphabet":
        return cls(q.midpoints())

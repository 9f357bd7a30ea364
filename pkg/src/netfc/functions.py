"""Target functions and their exhaustive outcome tables.

A :class:`TargetFunction` evaluates on broadcastable numpy arrays of
symbol values. Its outputs become discrete levels either through an
output quantizer or, for exact-valued functions, directly.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, TableTooLargeError
from .quantization import Alphabet, Quantizer, quantize_array

DEFAULT_TABLE_CAP = 1 << 24
VALVE_MIN, VALVE_MAX = 0.0, 100.0

_DUMP_MAGIC = b"NFCT"


@dataclass(frozen=True)
class PidGains:
    kp: float = -0.5
    ki: float = 10.0
    kd: float = 90.0

    def __post_init__(self):
        if not all(math.isfinite(g) for g in (self.kp, self.ki, self.kd)):
            raise ValueError("PID gains must be finite")

    def to_dict(self) -> dict:
        return {"kp": self.kp, "ki": self.ki, "kd": self.kd}


def eval_pid(g: PidGains, e, ei, ed):
    """Valve command in percent, clamped to [0, 100].

    The sum is formed as ``(kp*e + ki*ei) + kd*ed`` so that it matches the
    cascade composition bit for bit.
    """
    u = (g.kp * e + g.ki * ei) + g.kd * ed
    if np.ndim(u) == 0:
        return min(max(float(u), VALVE_MIN), VALVE_MAX)
    return np.clip(u, VALVE_MIN, VALVE_MAX)


def eval_mod_sum(x: int, y: int) -> int:
    if x not in (0, 1, 2, 3) or y not in (0, 1):
        raise DomainError(f"mod-sum defined on {{0..3}} x {{0,1}}, got ({x}, {y})")
    return (x + y) % 2


@dataclass(frozen=True)
class TargetFunction:
    """A function of ``arity`` sources with a discrete output set.

    If ``output_quantizer`` is None the evaluator must already return
    integer levels in ``[0, num_levels)``.
    """

    arity: int
    evaluator: Callable[..., np.ndarray]
    output_quantizer: Quantizer | None = None
    output_levels: int | None = None
    name: str = "f"

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if self.output_quantizer is None and not self.output_levels:
            raise ValueError("exact-valued functions need output_levels")

    @property
    def num_levels(self) -> int:
        if self.output_quantizer is not None:
            return self.output_quantizer.levels
        return int(self.output_levels)

    @property
    def output_bits(self) -> int:
        return max(1, (self.num_levels - 1).bit_length())

    def __call__(self, *args):
        return self.evaluator(*args)

    def levels(self, *args) -> np.ndarray:
        out = self.evaluator(*args)
        if self.output_quantizer is not None:
            return quantize_array(self.output_quantizer, out)
        out = np.asarray(out)
        if out.size and (out.min() < 0 or out.max() >= self.num_levels):
            raise DomainError(f"{self.name} produced a level outside [0, {self.num_levels})")
        return out.astype(np.int64)


def mod_sum_function() -> TargetFunction:
    return TargetFunction(
        2,
        lambda x, y: (np.asarray(x).astype(np.int64) + np.asarray(y).astype(np.int64)) % 2,
        output_levels=2,
        name="mod_sum",
    )


def mod_sum_alphabets() -> list[Alphabet]:
    return [Alphabet.uniform([0, 1, 2, 3]), Alphabet.uniform([0, 1])]


def pid_function(g: PidGains, output_quantizer: Quantizer) -> TargetFunction:
    return TargetFunction(3, lambda e, ei, ed: eval_pid(g, e, ei, ed), output_quantizer, name="pid")


def decompose_pid(g: PidGains) -> tuple[Callable, Callable]:
    """Split the PID law into ``m = kp*e + ki*ei`` and ``clamp(m + kd*ed)``.

    Only the final stage clamps, so ``final(intermediate(e, ei), ed)``
    equals :func:`eval_pid` exactly.
    """

    def intermediate(e, ei):
        return g.kp * e + g.ki * ei

    def final(m, ed):
        u = m + g.kd * ed
        if np.ndim(u) == 0:
            return min(max(float(u), VALVE_MIN), VALVE_MAX)
        return np.clip(u, VALVE_MIN, VALVE_MAX)

    return intermediate, final


@dataclass(frozen=True, eq=False)
class OutcomeTable:
    """Output levels for every joint input tuple.

    ``outputs`` has one axis per source, source 0 outermost, so
    ``outputs.ravel()`` is the row-major serialization order.
    """

    input_alphabets: tuple[Alphabet, ...]
    outputs: np.ndarray
    output_levels: int

    @property
    def arity(self) -> int:
        return len(self.input_alphabets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.input_alphabets)

    @property
    def output_bits(self) -> int:
        return max(1, (self.output_levels - 1).bit_length())

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "sizes": list(self.sizes),
            "output_bits": self.output_bits,
            "symbols": [a.symbols.tolist() for a in self.input_alphabets],
            "outputs": self.outputs.ravel().tolist(),
        }

    def to_bytes(self) -> bytes:
        return dump_levels(_DUMP_MAGIC, self.sizes, self.output_bits, self.outputs)


def _dtype_for(bits: int) -> np.dtype:
    return np.dtype("<u1") if bits <= 8 else np.dtype("<u2")


def dump_levels(magic: bytes, shape: Sequence[int], bits: int, levels: np.ndarray) -> bytes:
    """Header ``magic, u32 arity, u32 size*arity, u8 bits`` then little-endian levels."""
    header = magic + struct.pack("<I", len(shape)) + struct.pack(f"<{len(shape)}I", *shape)
    header += struct.pack("<B", bits)
    return header + np.ascontiguousarray(levels, dtype=_dtype_for(bits)).tobytes()


def load_levels(magic: bytes, data: bytes) -> tuple[tuple[int, ...], int, np.ndarray]:
    if data[:4] != magic:
        raise ValueError(f"bad magic {data[:4]!r}, expected {magic!r}")
    (arity,) = struct.unpack_from("<I", data, 4)
    shape = struct.unpack_from(f"<{arity}I", data, 8)
    off = 8 + 4 * arity
    (bits,) = struct.unpack_from("<B", data, off)
    levels = np.frombuffer(data, dtype=_dtype_for(bits), offset=off + 1)
    if levels.size != math.prod(shape):
        raise ValueError("payload length does not match header")
    return tuple(shape), bits, levels.reshape(shape)


def load_outcome_table(data: bytes) -> tuple[tuple[int, ...], int, np.ndarray]:
    return load_levels(_DUMP_MAGIC, data)


def build_outcome_table(
    f: TargetFunction,
    alphabets: Sequence[Alphabet],
    cap: int = DEFAULT_TABLE_CAP,
) -> OutcomeTable:
    """Evaluate ``f`` on every tuple of symbol values.

    Evaluation is chunked along the outermost source to bound peak memory.
    """
    alphabets = tuple(alphabets)
    if f.arity != len(alphabets):
        raise ValueError(f"{f.name} takes {f.arity} inputs, got {len(alphabets)} alphabets")
    sizes = [len(a) for a in alphabets]
    total = math.prod(sizes)
    if total > cap:
        raise TableTooLargeError(f"outcome table would have {total} entries (cap {cap})")

    grids = [
        a.symbols.reshape([-1 if i == k else 1 for k in range(len(sizes))])
        for i, a in enumerate(alphabets)
    ]
    out = np.empty(sizes, dtype=_dtype_for(f.output_bits))
    inner = total // sizes[0]
    chunk = max(1, (1 << 21) // max(inner, 1))
    for start in range(0, sizes[0], chunk):
        sl = slice(start, start + chunk)
        args = [grids[0][sl]] + grids[1:]
        out[sl] = np.broadcast_to(f.levels(*args), [min(chunk, sizes[0] - start)] + sizes[1:])
    out.setflags(write=False)
    return OutcomeTable(alphabets, out, f.num_levels)


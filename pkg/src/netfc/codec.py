"""Color encoders, decoder lookup tables and the on-wire frame format.

Frames are MSB-first bit strings, sources in index order, with no padding
between codewords and zero padding to the next byte at the end.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chargraph import Coloring
from .errors import InconsistentColoringError, TruncatedFrameError, UnknownColorTupleError
from .functions import OutcomeTable, dump_levels, load_levels

_LUT_MAGIC = b"NFCL"


def codeword_length(num_colors: int) -> int:
    return 0 if num_colors <= 1 else math.ceil(math.log2(num_colors))


@dataclass(frozen=True, eq=False)
class Encoder:
    color_of: np.ndarray
    num_colors: int

    @property
    def codeword_len(self) -> int:
        return codeword_length(self.num_colors)

    def __post_init__(self):
        # plain list for fast scalar lookup on the online path
        object.__setattr__(self, "_lookup", self.color_of.tolist())


def build_encoder(c: Coloring) -> Encoder:
    return Encoder(c.color_of, c.num_colors)


def encode(e: Encoder, symbol: int) -> int:
    """Codeword (the color id) for ``symbol``; ``e.codeword_len`` bits wide."""
    if not 0 <= symbol < len(e._lookup):
        raise IndexError(f"symbol {symbol} outside alphabet of size {len(e._lookup)}")
    return e._lookup[symbol]


def codeword_bits(e: Encoder, symbol: int) -> str:
    n = e.codeword_len
    return format(encode(e, symbol), f"0{n}b") if n else ""


@dataclass(frozen=True, eq=False)
class DecoderLut:
    """Dense output levels indexed by the mixed-radix color tuple."""

    color_counts: tuple[int, ...]
    table: np.ndarray
    output_bits: int

    @property
    def arity(self) -> int:
        return len(self.color_counts)

    @property
    def entries(self) -> int:
        return int(self.table.size)

    def __post_init__(self):
        object.__setattr__(self, "_flat", self.table.ravel().tolist())
        strides, acc = [], 1
        for n in reversed(self.color_counts):
            strides.append(acc)
            acc *= n
        object.__setattr__(self, "_strides", tuple(reversed(strides)))

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "color_counts": list(self.color_counts),
            "output_bits": self.output_bits,
            "table": self.table.ravel().tolist(),
        }

    def to_bytes(self) -> bytes:
        return dump_levels(_LUT_MAGIC, self.color_counts, self.output_bits, self.table)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DecoderLut":
        shape, bits, levels = load_levels(_LUT_MAGIC, data)
        return cls(shape, levels.astype(np.int64), bits)


def build_decoder_lut(t: OutcomeTable, colorings: Sequence[Coloring]) -> DecoderLut:
    """Map each color tuple to the one output level shared by its preimage.

    Raises :class:`InconsistentColoringError` if two input tuples with equal
    colors disagree, which means the colorings are not proper for ``t``.
    """
    if len(colorings) != t.arity:
        raise ValueError(f"need one coloring per source ({t.arity}), got {len(colorings)}")
    counts = tuple(c.num_colors for c in colorings)
    # broadcast each source's colors along its own axis
    idx = tuple(
        c.color_of.reshape([-1 if i == k else 1 for k in range(t.arity)])
        for i, c in enumerate(colorings)
    )
    flat = np.ravel_multi_index(np.broadcast_arrays(*idx), counts) if counts else np.zeros((), np.int64)
    out = t.outputs.astype(np.int64)
    table = np.full(math.prod(counts), -1, dtype=np.int64)
    table[flat.ravel()] = out.ravel()
    bad = table[flat.ravel()] != out.ravel()
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise InconsistentColoringError(
            f"color tuple {np.unravel_index(flat.ravel()[k], counts)} has conflicting outputs"
        )
    if (table < 0).any():
        # unreachable tuple: only possible with non-surjective colorings
        raise InconsistentColoringError("some color tuples have no preimage")
    return DecoderLut(counts, table.reshape(counts), t.output_bits)


def decode(lut: DecoderLut, colors: Sequence[int]) -> int:
    if len(colors) != lut.arity:
        raise UnknownColorTupleError(f"expected {lut.arity} colors, got {len(colors)}")
    k = 0
    for c, n, s in zip(colors, lut.color_counts, lut._strides):
        if not 0 <= c < n:
            raise UnknownColorTupleError(f"color tuple {tuple(colors)} outside table {lut.color_counts}")
        k += c * s
    return lut._flat[k]


def lut_json(lut: DecoderLut) -> str:
    return json.dumps(lut.to_json())


@dataclass(frozen=True)
class Frame:
    payload: bytes
    layout: tuple[int, ...]

    @property
    def num_bits(self) -> int:
        return sum(self.layout)


def pack_frame(codewords: Sequence[int], layout: Sequence[int]) -> Frame:
    if len(codewords) != len(layout):
        raise ValueError("one length per codeword required")
    acc, nbits = 0, 0
    for cw, n in zip(codewords, layout):
        if n < 0 or cw < 0 or cw >> n:
            raise ValueError(f"codeword {cw} does not fit in {n} bits")
        acc = (acc << n) | cw
        nbits += n
    nbytes = (nbits + 7) // 8
    acc <<= nbytes * 8 - nbits
    return Frame(acc.to_bytes(nbytes, "big"), tuple(int(n) for n in layout))


def unpack_frame(f: Frame) -> list[int]:
    nbits = f.num_bits
    if len(f.payload) * 8 < nbits:
        raise TruncatedFrameError(f"frame holds {len(f.payload) * 8} bits, layout needs {nbits}")
    acc = int.from_bytes(f.payload, "big") >> (len(f.payload) * 8 - nbits)
    out = []
    for n in reversed(f.layout):
        out.append(acc & ((1 << n) - 1))
        acc >>= n
    return out[::-1]

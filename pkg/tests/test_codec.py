import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from netfc.chargraph import Coloring, build_characteristic_graph, greedy_color
from netfc.codec import (
    DecoderLut,
    Frame,
    build_decoder_lut,
    build_encoder,
    codeword_bits,
    codeword_length,
    decode,
    encode,
    lut_json,
    pack_frame,
    unpack_frame,
)
from netfc.errors import InconsistentColoringError, TruncatedFrameError, UnknownColorTupleError
from netfc.functions import build_outcome_table, mod_sum_alphabets, mod_sum_function


@pytest.mark.parametrize("n,bits", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (128, 7), (129, 8)])
def test_codeword_length(n, bits):
    assert codeword_length(n) == bits


def mod_sum_parts():
    t = build_outcome_table(mod_sum_function(), mod_sum_alphabets())
    cs = [greedy_color(build_characteristic_graph(t, s)) for s in range(2)]
    return t, cs


def test_mod_sum_lut():
    t, cs = mod_sum_parts()
    lut = build_decoder_lut(t, cs)
    assert lut.table.tolist() == [[0, 1], [1, 0]]
    assert lut.entries == 4
    for x in range(4):
        for y in range(2):
            cols = (encode(build_encoder(cs[0]), x), encode(build_encoder(cs[1]), y))
            assert decode(lut, cols) == (x + y) % 2
    assert codeword_bits(build_encoder(cs[0]), 3) == "1"


def test_encode_errors():
    e = build_encoder(Coloring(np.array([0, 0]), 1))
    assert e.codeword_len == 0 and codeword_bits(e, 1) == ""
    with pytest.raises(IndexError):
        encode(e, 2)


def test_decode_errors():
    t, cs = mod_sum_parts()
    lut = build_decoder_lut(t, cs)
    with pytest.raises(UnknownColorTupleError):
        decode(lut, (2, 0))
    with pytest.raises(UnknownColorTupleError):
        decode(lut, (0,))


def test_inconsistent_coloring_detected():
    t, _ = mod_sum_parts()
    bad = [Coloring(np.zeros(4, dtype=np.int64), 1), Coloring(np.array([0, 1]), 2)]
    with pytest.raises(InconsistentColoringError):
        build_decoder_lut(t, bad)


def test_lut_binary_and_json_dump():
    t, cs = mod_sum_parts()
    lut = build_decoder_lut(t, cs)
    data = lut.to_bytes()
    assert data[:4] == b"NFCL"
    back = DecoderLut.from_bytes(data)
    assert back.color_counts == (2, 2)
    np.testing.assert_array_equal(back.table, lut.table)
    assert '"table": [0, 1, 1, 0]' in lut_json(lut)


def test_frame_layout():
    f = pack_frame([1, 0, 5], [1, 2, 3])
    # 1 | 00 | 101 -> 1001 0100 padded at the end
    assert f.payload == bytes([0b10010100])
    assert f.num_bits == 6
    assert unpack_frame(f) == [1, 0, 5]
    assert pack_frame([], []).payload == b""
    assert pack_frame([0], [0]).payload == b""


def test_frame_errors():
    with pytest.raises(ValueError):
        pack_frame([4], [2])
    with pytest.raises(ValueError):
        pack_frame([1], [1, 2])
    with pytest.raises(TruncatedFrameError):
        unpack_frame(Frame(b"\x00", (4, 5)))


@given(st.lists(st.integers(0, 16).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))), max_size=12))
def test_frame_round_trip(items):
    layout = [n for n, _ in items]
    cws = [c for _, c in items]
    f = pack_frame(cws, layout)
    assert len(f.payload) == (sum(layout) + 7) // 8
    assert unpack_frame(f) == cws

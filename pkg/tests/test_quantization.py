import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from netfc.errors import BitsOutOfRangeError, InvalidRangeError, LevelOutOfRangeError
from netfc.quantization import (
    Alphabet,
    Quantizer,
    build_quantizer,
    dequantize,
    dequantize_array,
    quantize,
    quantize_array,
)


def test_build_sixteen_levels():
    q = build_quantizer(-8, 8, 4)
    assert q.levels == 16
    assert q.step == 1.0
    np.testing.assert_array_equal(q.midpoints(), np.arange(-7.5, 8.0, 1.0))


def test_build_one_bit():
    q = build_quantizer(0, 1, 1)
    assert q.levels == 2
    np.testing.assert_array_equal(q.midpoints(), [0.25, 0.75])


def test_build_valve_range():
    q = build_quantizer(0, 100, 7)
    assert q.levels == 128
    assert q.step == 0.78125
    assert q.step * q.levels == q.hi - q.lo


@pytest.mark.parametrize("lo,hi", [(1, 1), (2, 1), (0, math.inf)])
def test_invalid_range(lo, hi):
    with pytest.raises(InvalidRangeError):
        build_quantizer(lo, hi, 4)


@pytest.mark.parametrize("bits", [0, 17, -1])
def test_bits_out_of_range(bits):
    with pytest.raises(BitsOutOfRangeError):
        build_quantizer(0, 1, bits)


@pytest.mark.parametrize(
    "q,v,expected",
    [
        ((-8, 8, 4), 0.2, 8),
        ((-8, 8, 4), -100, 0),
        ((-8, 8, 4), 8.0, 15),
        ((-8, 8, 4), 1e9, 15),
        ((0, 100, 7), 50.0, 64),
    ],
)
def test_quantize(q, v, expected):
    assert quantize(build_quantizer(*q), v) == expected


def test_dequantize():
    assert dequantize(build_quantizer(-8, 8, 4), 8) == 0.5
    assert dequantize(build_quantizer(0, 1, 1), 0) == 0.25
    with pytest.raises(LevelOutOfRangeError):
        dequantize(build_quantizer(0, 1, 1), 2)
    with pytest.raises(LevelOutOfRangeError):
        dequantize_array(build_quantizer(0, 1, 1), [0, -1])


def test_round_trip_random():
    rng = np.random.default_rng(1)
    q = build_quantizer(-12, 12, 7)
    for v in rng.uniform(q.lo, q.hi, 1000):
        assert abs(dequantize(q, quantize(q, v)) - v) <= q.step / 2


quantizers = st.builds(
    lambda lo, width, bits: Quantizer(lo, lo + width, bits),
    st.floats(-1e3, 1e3),
    st.floats(1e-3, 1e3),
    st.integers(1, 12),
)


@given(quantizers, st.floats(0, 1, exclude_max=True))
def test_error_bounded_by_half_step(q, frac):
    v = q.lo + frac * (q.hi - q.lo)
    if v >= q.hi:
        return
    slack = 8 * np.finfo(float).eps * max(abs(q.lo), abs(q.hi))
    assert abs(dequantize(q, quantize(q, v)) - v) <= q.step / 2 + slack


@given(quantizers)
def test_midpoints_are_fixed_points(q):
    levels = np.arange(q.levels)
    np.testing.assert_array_equal(quantize_array(q, dequantize_array(q, levels)), levels)


@given(quantizers, st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=20))
def test_monotone_and_saturating(q, vs):
    vs = sorted(vs)
    ks = [quantize(q, v) for v in vs]
    assert ks == sorted(ks)
    assert all(0 <= k < q.levels for k in ks)
    np.testing.assert_array_equal(quantize_array(q, vs), ks)


def test_json_round_trip():
    q = build_quantizer(-2, 2, 6)
    assert q.to_dict() == {"lo": -2.0, "hi": 2.0, "bits": 6}
    assert Quantizer.from_dict(q.to_dict()) == q


def test_alphabet_defaults_to_uniform():
    a = Alphabet.from_quantizer(build_quantizer(0, 1, 3))
    assert len(a) == 8
    np.testing.assert_allclose(a.probabilities, 1 / 8)


def test_alphabet_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        Alphabet([0.0, 1.0], [0.5, 0.6])
    with pytest.raises(ValueError):
        Alphabet([0.0, 1.0], [1.5, -0.5])
    with pytest.raises(ValueError):
        Alphabet([0.0], [0.5, 0.5])

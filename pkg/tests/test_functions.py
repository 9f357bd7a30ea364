import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import pid
from netfc.errors import DomainError, TableTooLargeError
from netfc.functions import (
    OutcomeTable,
    PidGains,
    build_outcome_table,
    decompose_pid,
    eval_mod_sum,
    eval_pid,
    load_outcome_table,
    mod_sum_alphabets,
    mod_sum_function,
    pid_function,
)
from netfc.quantization import Alphabet, Quantizer, quantize


@pytest.mark.parametrize("args,expected", [((0, 0, 0), 0.0), ((-2, 0, 0), 1.0), ((0, 100, 0), 100.0), ((0, 0, -1), 0.0)])
def test_eval_pid_saturates(args, expected):
    assert eval_pid(PidGains(), *args) == expected


def test_eval_pid_matches_oracle_on_grid():
    g = PidGains(-0.5, 10.0, 90.0)
    rng = np.random.default_rng(0)
    xs = rng.uniform(-3, 3, (500, 3))
    vec = eval_pid(g, xs[:, 0], xs[:, 1], xs[:, 2])
    for row, v in zip(xs, vec):
        assert v == pid(g.kp, g.ki, g.kd, *row)
        assert eval_pid(g, *row) == v


@given(st.floats(-50, 50), st.floats(-5, 5), st.floats(-5, 5), st.floats(-20, 20), st.floats(-20, 20), st.floats(-200, 200))
def test_decomposition_is_exact(e, ei, ed, kp, ki, kd):
    g = PidGains(kp, ki, kd)
    inter, final = decompose_pid(g)
    assert final(inter(e, ei), ed) == eval_pid(g, e, ei, ed)


def test_mod_sum_table():
    assert [eval_mod_sum(x, y) for x in range(4) for y in range(2)] == [0, 1, 1, 0, 0, 1, 1, 0]
    with pytest.raises(DomainError):
        eval_mod_sum(4, 0)
    t = build_outcome_table(mod_sum_function(), mod_sum_alphabets())
    assert t.sizes == (4, 2)
    assert t.outputs.ravel().tolist() == [0, 1, 1, 0, 0, 1, 1, 0]


def test_table_is_row_major_source0_outermost():
    f = pid_function(PidGains(), Quantizer(0, 100, 4))
    alph = [Alphabet.from_quantizer(Quantizer(-2, 2, 2)) for _ in range(3)]
    t = build_outcome_table(f, alph)
    flat = t.outputs.ravel()
    q = Quantizer(0, 100, 4)
    idx = 0
    for e in alph[0].symbols:
        for ei in alph[1].symbols:
            for ed in alph[2].symbols:
                assert flat[idx] == quantize(q, pid(-0.5, 10, 90, e, ei, ed))
                idx += 1
    assert not t.outputs.flags.writeable


def test_table_cap():
    f = pid_function(PidGains(), Quantizer(0, 100, 7))
    alph = [Alphabet.from_quantizer(Quantizer(-1, 1, 8))] * 3
    with pytest.raises(TableTooLargeError):
        build_outcome_table(f, alph, cap=1 << 20)


def test_arity_mismatch():
    with pytest.raises(ValueError):
        build_outcome_table(mod_sum_function(), mod_sum_alphabets()[:1])


def test_chunked_build_matches_single_shot():
    # 2^7 outer rows with 2^14 inner entries forces several chunks
    f = pid_function(PidGains(), Quantizer(0, 100, 7))
    alph = [Alphabet.from_quantizer(Quantizer(-12, 12, 7)), Alphabet.from_quantizer(Quantizer(-2, 2, 7)),
            Alphabet.from_quantizer(Quantizer(-6, 6, 7))]
    t = build_outcome_table(f, alph)
    grid = np.meshgrid(*[a.symbols for a in alph], indexing="ij")
    np.testing.assert_array_equal(t.outputs, f.levels(*grid))


def test_binary_dump_round_trip():
    t = build_outcome_table(mod_sum_function(), mod_sum_alphabets())
    data = t.to_bytes()
    assert data[:4] == b"NFCT"
    # magic + arity + two sizes + bits byte + 8 levels
    assert len(data) == 4 + 4 + 8 + 1 + 8
    shape, bits, levels = load_outcome_table(data)
    assert shape == (4, 2) and bits == 1
    np.testing.assert_array_equal(levels, t.outputs)
    with pytest.raises(ValueError):
        load_outcome_table(b"XXXX" + data[4:])
    with pytest.raises(ValueError):
        load_outcome_table(data[:-1])


def test_wide_outputs_use_two_bytes():
    f = pid_function(PidGains(), Quantizer(0, 100, 10))
    alph = [Alphabet.from_quantizer(Quantizer(-1, 1, 1))] * 3
    t = build_outcome_table(f, alph)
    assert t.output_bits == 10
    assert len(t.to_bytes()) == 4 + 4 + 12 + 1 + 2 * 8


def test_json_dump():
    t = build_outcome_table(mod_sum_function(), mod_sum_alphabets())
    j = t.to_json()
    assert j["sizes"] == [4, 2]
    assert j["outputs"] == [0, 1, 1, 0, 0, 1, 1, 0]
    assert isinstance(t, OutcomeTable)

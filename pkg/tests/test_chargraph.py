import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_edges, entropy
from netfc.chargraph import (
    CharacteristicGraph,
    Coloring,
    build_characteristic_graph,
    chromatic_entropy,
    compression_rate,
    graph_report,
    greedy_color,
    row_classes,
)
from netfc.codec import build_decoder_lut
from netfc.functions import TargetFunction, build_outcome_table, mod_sum_alphabets, mod_sum_function
from netfc.quantization import Alphabet


def mod_sum_table():
    return build_outcome_table(mod_sum_function(), mod_sum_alphabets())


def test_mod_sum_graphs():
    t = mod_sum_table()
    gx = build_characteristic_graph(t, 0)
    gy = build_characteristic_graph(t, 1)
    assert gx.edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert gy.edges() == [(0, 1)]
    cx, cy = greedy_color(gx), greedy_color(gy)
    assert cx.color_of.tolist() == [0, 1, 0, 1]
    assert chromatic_entropy(cx, t.input_alphabets[0]) == 1.0
    assert compression_rate(1.0, 2) == 50.0
    assert compression_rate(chromatic_entropy(cy, t.input_alphabets[1]), 1) == 0.0


def test_graph_report_and_dot():
    t = mod_sum_table()
    g = build_characteristic_graph(t, 0)
    c = greedy_color(g)
    rep = graph_report(g, c, t.input_alphabets[0])
    assert rep["num_colors"] == 2 and rep["compression_pct"] == 50.0
    dot = g.to_dot(c, "x")
    assert dot.startswith("graph x {") and dot.count("--") == 4


def test_from_edges_and_neighbors():
    g = CharacteristicGraph.from_edges(4, [(0, 2), (3, 0)])
    assert g.neighbors(0) == [2, 3]
    assert g.num_edges == 2
    assert g.has_edge(2, 0) and not g.has_edge(1, 2)
    with pytest.raises(ValueError):
        CharacteristicGraph.from_edges(2, [(1, 1)])


def test_greedy_on_odd_cycle_needs_three():
    g = CharacteristicGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    c = greedy_color(g)
    assert c.num_colors == 3 and c.is_proper(g)


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring(np.array([0, 2]), 2)


def test_constant_function_single_color():
    f = TargetFunction(2, lambda x, y: np.zeros(np.broadcast(x, y).shape, int), output_levels=1)
    t = build_outcome_table(f, [Alphabet.uniform(range(5)), Alphabet.uniform(range(3))])
    g = build_characteristic_graph(t, 0)
    assert g.num_edges == 0
    c = greedy_color(g)
    assert c.num_colors == 1
    assert chromatic_entropy(c, t.input_alphabets[0]) == 0.0
    assert compression_rate(0.0, 3) == 100.0


def test_compression_rate_validation():
    with pytest.raises(ValueError):
        compression_rate(1.0, 0)
    with pytest.raises(ValueError):
        compression_rate(-0.1, 2)
    assert compression_rate(3.0, 2) == -50.0


def test_nonuniform_entropy():
    a = Alphabet([0, 1, 2, 3], [0.5, 0.25, 0.125, 0.125])
    c = Coloring(np.array([0, 1, 1, 0]), 2)
    assert chromatic_entropy(c, a) == pytest.approx(entropy([0.625, 0.375]), abs=1e-12)


@st.composite
def random_tables(draw):
    arity = draw(st.integers(1, 3))
    total_bits = draw(st.integers(arity, 6))
    # split total_bits into per-source bit counts >= 1
    cuts = sorted(draw(st.lists(st.integers(1, total_bits - 1), min_size=arity - 1, max_size=arity - 1, unique=True))) if arity > 1 else []
    bits = [b - a for a, b in zip([0] + cuts, cuts + [total_bits])]
    sizes = [draw(st.integers(max(1, 2 ** (b - 1)), 2**b)) for b in bits]
    levels = draw(st.integers(1, 5))
    data = draw(st.lists(st.integers(0, levels - 1), min_size=math.prod(sizes), max_size=math.prod(sizes)))
    lut = np.asarray(data, dtype=np.int64).reshape(sizes)

    def f(*args):
        idx = np.broadcast_arrays(*[np.asarray(a, dtype=np.int64) for a in args])
        return lut[tuple(idx)]

    alph = []
    for n in sizes:
        w = np.asarray(draw(st.lists(st.integers(1, 9), min_size=n, max_size=n)), float)
        alph.append(Alphabet(np.arange(n), w / w.sum()))
    return build_outcome_table(TargetFunction(arity, f, output_levels=levels), alph)


@settings(max_examples=150, deadline=None)
@given(random_tables())
def test_graph_coloring_lut_properties(t):
    colorings = []
    for s in range(t.arity):
        g = build_characteristic_graph(t, s)
        assert set(g.edges()) == brute_force_edges(t.outputs, t.sizes, s)
        c = greedy_color(g)
        assert c.is_proper(g)
        # complete multipartite: greedy hits exactly the number of row classes
        assert c.num_colors == len(set(row_classes(t, s).tolist()))
        h = chromatic_entropy(c, t.input_alphabets[s])
        assert 0 <= h <= math.log2(c.num_colors) + 1e-12
        colorings.append(c)
    lut = build_decoder_lut(t, colorings)
    for idx in np.ndindex(*t.sizes):
        cols = tuple(int(colorings[s].color_of[i]) for s, i in enumerate(idx))
        assert lut.table[cols] == t.outputs[idx]

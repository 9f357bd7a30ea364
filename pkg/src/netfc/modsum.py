"""Two-source worked example: ``f(x, y) = (x + y) mod 2``.

x is uniform on {0, 1, 2, 3} and y on {0, 1}.
"""

from __future__ import annotations

from .chargraph import build_characteristic_graph, graph_report, greedy_color
from .codec import build_decoder_lut, build_encoder
from .functions import build_outcome_table, mod_sum_alphabets, mod_sum_function

EXPECTED = {
    "x": {"edges": [[0, 1], [0, 3], [1, 2], [2, 3]], "num_colors": 2, "entropy_bits": 1.0, "compression_pct": 50.0},
    "y": {"edges": [[0, 1]], "num_colors": 2, "entropy_bits": 1.0, "compression_pct": 0.0},
    "lut": [[0, 1], [1, 0]],
    "outcomes": [0, 1, 1, 0, 0, 1, 1, 0],
}


def run_example() -> dict:
    alphabets = mod_sum_alphabets()
    table = build_outcome_table(mod_sum_function(), alphabets)
    graphs = [build_characteristic_graph(table, i) for i in range(2)]
    colorings = [greedy_color(g) for g in graphs]
    lut = build_decoder_lut(table, colorings)
    report = {"outcomes": table.outputs.ravel().tolist(), "lut": lut.table.tolist()}
    for name, g, c, a, bits in zip("xy", graphs, colorings, alphabets, (2, 1)):
        report[name] = graph_report(g, c, a, bits) | {"codeword_len": build_encoder(c).codeword_len}
    report["dot"] = "".join(g.to_dot(c, name=f"G_{n}") for n, g, c in zip("xy", graphs, colorings))
    return report


def mismatches(report: dict) -> list[str]:
    """Differences between ``report`` and the expected worked-example values."""
    bad = []
    for name in "xy":
        for key, want in EXPECTED[name].items():
            got = report[name][key]
            if got != want:
                bad.append(f"{name}.{key}: expected {want}, got {got}")
    for key in ("lut", "outcomes"):
        if report[key] != EXPECTED[key]:
            bad.append(f"{key}: expected {EXPECTED[key]}, got {report[key]}")
    return bad


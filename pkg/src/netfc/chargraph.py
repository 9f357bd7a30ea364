"""Characteristic graphs, greedy coloring and chromatic entropy."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .functions import OutcomeTable
from .quantization import Alphabet


@dataclass(frozen=True, eq=False)
class CharacteristicGraph:
    """Conflict graph of one source.

    ``adjacency[u]`` is an int bitset: bit ``v`` is set iff symbols ``u``
    and ``v`` must be told apart by the destination.
    """

    source_index: int
    num_vertices: int
    adjacency: tuple[int, ...]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adjacency[u] >> v) & 1)

    def neighbors(self, u: int) -> list[int]:
        bits, out = self.adjacency[u], []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_vertices) for v in self.neighbors(u) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(bin(a).count("1") for a in self.adjacency) // 2

    @classmethod
    def from_edges(cls, num_vertices: int, edges, source_index: int = 0) -> "CharacteristicGraph":
        adj = [0] * num_vertices
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(source_index, num_vertices, tuple(adj))

    def to_dot(self, coloring: "Coloring | None" = None, name: str | None = None) -> str:
        name = name or f"G{self.source_index}"
        lines = [f"graph {name} {{"]
        for u in range(self.num_vertices):
            if coloring is None:
                lines.append(f'  {u} [label="{u}"];')
            else:
                c = int(coloring.color_of[u])
                lines.append(
                    f'  {u} [label="{u}/c{c}", style=filled, colorscheme=set312, fillcolor={c % 12 + 1}];'
                )
        lines += [f"  {u} -- {v};" for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class Coloring:
    color_of: np.ndarray
    num_colors: int

    def __post_init__(self):
        colors = np.asarray(self.color_of, dtype=np.int64)
        object.__setattr__(self, "color_of", colors)
        if colors.size and set(np.unique(colors).tolist()) != set(range(self.num_colors)):
            raise ValueError("color ids must be exactly 0..num_colors-1")

    def is_proper(self, g: CharacteristicGraph) -> bool:
        return all(self.color_of[u] != self.color_of[v] for u, v in g.edges())


def row_classes(t: OutcomeTable, source: int) -> np.ndarray:
    """Label each symbol of ``source`` by its output row over all other sources.

    Two symbols share a label iff they give identical outputs for every
    assignment of the other sources. Labels are numbered by first appearance.
    """
    if not 0 <= source < t.arity:
        raise IndexError(f"source {source} out of range for arity {t.arity}")
    rows = np.ascontiguousarray(np.moveaxis(t.outputs, source, 0).reshape(t.sizes[source], -1))
    seen: dict[bytes, int] = {}
    labels = [seen.setdefault(row.tobytes(), len(seen)) for row in rows]
    return np.asarray(labels, dtype=np.int64)

def build_characteristic_graph(t: OutcomeTable, source: int) -> CharacteristicGraph:
    """Edge ``(u, v)`` iff some assignment of the other sources separates them.

    Every tuple has positive probability under the product model, so this
    reduces to comparing whole output rows: the graph is complete
    multipartite over the classes of identical rows.
    """
    labels = row_classes(t, source)
    n = labels.size
    full = (1 << n) - 1
    class_mask: dict[int, int] = {}
    for v, c in enumerate(labels.tolist()):
        class_mask[c] = class_mask.get(c, 0) | (1 << v)
    adj = tuple(full & ~class_mask[c] for c in labels.tolist())
    return CharacteristicGraph(source, n, adj)


def greedy_color(g: CharacteristicGraph) -> Coloring:
    """First-fit coloring in ascending vertex order."""
    color_of = [0] * g.num_vertices
    members: list[int] = []  # bitset of vertices per color
    for u in range(g.num_vertices):
        nbrs = g.adjacency[u]
        for c, m in enumerate(members):
            if not nbrs & m:
                break
        else:
            c = len(members)
            members.append(0)
        members[c] |= 1 << u
        color_of[u] = c
    return Coloring(np.asarray(color_of, dtype=np.int64), max(len(members), 1))


def color_probabilities(c: Coloring, a: Alphabet) -> np.ndarray:
    if c.color_of.size != len(a):
        raise ValueError("coloring and alphabet sizes differ")
    return np.bincount(c.color_of, weights=a.probabilities, minlength=c.num_colors)


def chromatic_entropy(c: Coloring, a: Alphabet) -> float:
    """Entropy in bits of the color distribution induced by the alphabet."""
    p = color_probabilities(c, a)
    p = p[p > 0]
    return float(max(0.0, -(p * np.log2(p)).sum()))


def compression_rate(entropy_bits: float, source_bits: int) -> float:
    """Percent of raw bits saved; negative when entropy exceeds the raw size."""
    if source_bits < 1:
        raise ValueError("source_bits must be >= 1")
    if entropy_bits < 0:
        raise ValueError("entropy must be non-negative")
    return 100.0 - entropy_bits * 100.0 / source_bits


def source_bits_of(a: Alphabet) -> int:
    return max(1, math.ceil(math.log2(len(a))))


def graph_report(g: CharacteristicGraph, c: Coloring, a: Alphabet, source_bits: int | None = None) -> dict:
    bits = source_bits if source_bits is not None else source_bits_of(a)
    h = chromatic_entropy(c, a)
    return {
        "source": g.source_index,
        "num_vertices": g.num_vertices,
        "edges": [list(e) for e in g.edges()],
        "colors": c.color_of.tolist(),
        "num_colors": c.num_colors,
        "entropy_bits": h,
        "compression_pct": compression_rate(h, bits),
    }


def graph_report_json(g: CharacteristicGraph, c: Coloring, a: Alphabet, source_bits: int | None = None) -> str:
    return json.dumps(graph_report(g, c, a, source_bits))

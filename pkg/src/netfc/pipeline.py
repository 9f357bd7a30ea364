"""Compile and run the simple and cascaded functional-compression topologies.

Simple: e, ei and ed are each color-encoded and sent to the controller,
which decodes with one three-way lookup table.

Cascaded: e and ei are sent to an intermediate node that decodes
``m = kp*e + ki*ei`` onto its own quantizer, then re-encodes ``m`` as a
fresh source; the controller decodes ``(m, ed)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .chargraph import (
    CharacteristicGraph,
    Coloring,
    build_characteristic_graph,
    chromatic_entropy,
    compression_rate,
    greedy_color,
)
from .codec import DecoderLut, Encoder, build_decoder_lut, build_encoder, decode, encode
from .functions import (
    DEFAULT_TABLE_CAP,
    OutcomeTable,
    PidGains,
    TargetFunction,
    build_outcome_table,
    decompose_pid,
    eval_pid,
)
from .quantization import Alphabet, Quantizer, dequantize, quantize, quantize_array

MODES = ("simple", "cascaded")
SOURCE_NAMES = ("e", "ei", "ed")

# Calibrated from a direct-control reference run, see plant.calibrate_ranges.
DEFAULT_RANGES: dict[str, tuple[float, float]] = {
    "e": (-12.0, 12.0),
    "ei": (-2.0, 2.0),
    "ed": (-6.0, 6.0),
}
VALVE_RANGE = (0.0, 100.0)


@dataclass(frozen=True)
class PipelineConfig:
    gains: PidGains
    source_quantizers: tuple[Quantizer, Quantizer, Quantizer]
    output_quantizer: Quantizer
    mode: str = "simple"
    intermediate_bits: int | None = None
    table_cap: int = DEFAULT_TABLE_CAP

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.source_quantizers) != 3:
            raise ValueError("PID pipelines take exactly three source quantizers")

    @property
    def bits(self) -> int:
        return int(self.source_quantizers[0].bits)

    @property
    def m_bits(self) -> int:
        return int(self.intermediate_bits or self.bits)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "gains": self.gains.to_dict(),
            "sources": {n: q.to_dict() for n, q in zip(SOURCE_NAMES, self.source_quantizers)},
            "output": self.output_quantizer.to_dict(),
            "intermediate_bits": self.m_bits,
            "table_cap": self.table_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        return cls(
            gains=PidGains(**d["gains"]),
            source_quantizers=tuple(Quantizer.from_dict(d["sources"][n]) for n in SOURCE_NAMES),
            output_quantizer=Quantizer.from_dict(d["output"]),
            mode=d.get("mode", "simple"),
            intermediate_bits=d.get("intermediate_bits"),
            table_cap=int(d.get("table_cap", DEFAULT_TABLE_CAP)),
        )


def default_config(
    bits: int = 7,
    mode: str = "simple",
    output_bits: int | None = None,
    ranges: dict[str, tuple[float, float]] | None = None,
    gains: PidGains | None = None,
    intermediate_bits: int | None = None,
) -> PipelineConfig:
    rng = dict(DEFAULT_RANGES)
    rng.update(ranges or {})
    return PipelineConfig(
        gains=gains or PidGains(),
        source_quantizers=tuple(Quantizer(*map(float, rng[n]), bits) for n in SOURCE_NAMES),
        output_quantizer=Quantizer(*VALVE_RANGE, output_bits or bits),
        mode=mode,
        intermediate_bits=intermediate_bits,
    )


def intermediate_quantizer(cfg: PipelineConfig) -> Quantizer:
    """Quantizer of node m, spanning the exact range of ``kp*e + ki*ei``.

    The range is taken over the source midpoints, so every reachable value
    is inside it (the maximum saturates into the top bin).
    """
    intermediate, _ = decompose_pid(cfg.gains)
    qe, qi, _ = cfg.source_quantizers
    m = intermediate(qe.midpoints()[:, None], qi.midpoints()[None, :])
    lo, hi = float(m.min()), float(m.max())
    if hi <= lo:
        hi = lo + 1.0
    return Quantizer(lo, hi, cfg.m_bits)


@dataclass(frozen=True, eq=False)
class Stage:
    """One FC hop: sources colored and decoded by a single lookup table."""

    name: str
    source_names: tuple[str, ...]
    source_bits: tuple[int, ...]
    table: OutcomeTable
    graphs: tuple[CharacteristicGraph, ...]
    colorings: tuple[Coloring, ...]
    encoders: tuple[Encoder, ...]
    lut: DecoderLut

    def source_metrics(self) -> list[dict]:
        out = []
        for name, bits, a, c, enc in zip(
            self.source_names, self.source_bits, self.table.input_alphabets, self.colorings, self.encoders
        ):
            h = chromatic_entropy(c, a)
            out.append(
                {
                    "name": name,
                    "stage": self.name,
                    "bits": bits,
                    "num_colors": c.num_colors,
                    "codeword_len": enc.codeword_len,
                    "entropy_bits": h,
                    "compression_pct": compression_rate(h, bits),
                }
            )
        return out


def compile_stage(
    name: str,
    f: TargetFunction,
    alphabets: Sequence[Alphabet],
    source_names: Sequence[str],
    source_bits: Sequence[int],
    cap: int = DEFAULT_TABLE_CAP,
) -> Stage:
    table = build_outcome_table(f, alphabets, cap=cap)
    graphs = tuple(build_characteristic_graph(table, i) for i in range(table.arity))
    colorings = tuple(greedy_color(g) for g in graphs)
    encoders = tuple(build_encoder(c) for c in colorings)
    lut = build_decoder_lut(table, colorings)
    return Stage(name, tuple(source_names), tuple(source_bits), table, graphs, colorings, encoders, lut)


@dataclass(eq=False)
class CompiledPipeline:
    config: PipelineConfig
    stages: tuple[Stage, ...]
    offline_seconds: float = 0.0
    m_quantizer: Quantizer | None = None
    m_levels: np.ndarray | None = None  # m symbol -> level of m_quantizer
    _links: tuple[int, ...] = field(init=False, repr=False)
    _run: object = field(init=False, repr=False)

    def __post_init__(self):
        self._links = tuple(e.codeword_len for s in self.stages for e in s.encoders)
        self._run = _fast_path(self)

    @property
    def mode(self) -> str:
        return self.config.mode

    @property
    def link_bits(self) -> dict[str, int]:
        """Codeword length per network link, keyed ``source->sink``."""
        if self.mode == "simple":
            sinks = ["dest"] * 3
            names = SOURCE_NAMES
        else:
            names = ("e", "ei", "m", "ed")
            sinks = ["m", "m", "dest", "dest"]
        return {f"{n}->{k}": b for n, k, b in zip(names, sinks, self._links)}

    @property
    def bits_per_sample(self) -> int:
        return sum(self._links)

    @property
    def raw_bits_per_sample(self) -> int:
        return sum(int(q.bits) for q in self.config.source_quantizers)

    @property
    def lut_entries(self) -> int:
        return sum(s.lut.entries for s in self.stages)

    @property
    def aggregate_compression(self) -> float:
        return 100.0 * (1.0 - self.bits_per_sample / self.raw_bits_per_sample)

    def source_metrics(self) -> list[dict]:
        return [m for s in self.stages for m in s.source_metrics()]

    def report(self, include_colorings: bool = False) -> dict:
        sources = self.source_metrics()
        if include_colorings:
            for m, (a, c) in zip(
                sources,
                [(a, c) for s in self.stages for a, c in zip(s.table.input_alphabets, s.colorings)],
            ):
                m["colors"] = c.color_of.tolist()
                m["probabilities"] = a.probabilities.tolist()
        rep = {
            "mode": self.mode,
            "bits": self.config.bits,
            "config": self.config.to_dict(),
            "sources": sources,
            "links": self.link_bits,
            "stages": [
                {"name": s.name, "lut_entries": s.lut.entries, "color_counts": list(s.lut.color_counts)}
                for s in self.stages
            ],
            "lut_entries_total": self.lut_entries,
            "bits_per_sample": self.bits_per_sample,
            "raw_bits_per_sample": self.raw_bits_per_sample,
            "aggregate_compression_pct": self.aggregate_compression,
            "offline_ms": self.offline_seconds * 1e3,
        }
        if self.m_quantizer is not None:
            rep["intermediate"] = {
                "quantizer": self.m_quantizer.to_dict(),
                "alphabet_size": int(self.m_levels.size),
            }
        return rep


def _source_alphabets(cfg: PipelineConfig) -> list[Alphabet]:
    return [Alphabet.from_quantizer(q) for q in cfg.source_quantizers]


def compile_simple(cfg: PipelineConfig) -> CompiledPipeline:
    if cfg.mode != "simple":
        raise ValueError("compile_simple needs mode='simple'")
    t0 = time.perf_counter()
    f = TargetFunction(3, lambda e, ei, ed: eval_pid(cfg.gains, e, ei, ed), cfg.output_quantizer, name="pid")
    stage = compile_stage(
        "dest",
        f,
        _source_alphabets(cfg),
        SOURCE_NAMES,
        [int(q.bits) for q in cfg.source_quantizers],
        cap=cfg.table_cap,
    )
    return CompiledPipeline(cfg, (stage,), time.perf_counter() - t0)


def compile_cascaded(cfg: PipelineConfig) -> CompiledPipeline:
    if cfg.mode != "cascaded":
        raise ValueError("compile_cascaded needs mode='cascaded'")
    t0 = time.perf_counter()
    intermediate, final = decompose_pid(cfg.gains)
    qe, qi, qd = cfg.source_quantizers
    qm = intermediate_quantizer(cfg)
    a_e, a_i, a_d = _source_alphabets(cfg)

    # stage 1 first yields raw m levels; reachable levels become m's alphabet
    f1 = TargetFunction(2, intermediate, qm, name="intermediate")
    raw = build_outcome_table(f1, [a_e, a_i], cap=cfg.table_cap)
    m_levels, inverse, counts = np.unique(raw.outputs, return_inverse=True, return_counts=True)
    m_symbols = inverse.reshape(raw.outputs.shape)
    m_alphabet = Alphabet(qm.lo + (m_levels + 0.5) * qm.step, counts / counts.sum())

    stage1_table = OutcomeTable(raw.input_alphabets, m_symbols, int(m_levels.size))
    stage1 = _stage_from_table("m", stage1_table, ("e", "ei"), (int(qe.bits), int(qi.bits)))

    f2 = TargetFunction(2, final, cfg.output_quantizer, name="final")
    stage2 = compile_stage("dest", f2, [m_alphabet, a_d], ("m", "ed"), (qm.bits, int(qd.bits)), cap=cfg.table_cap)
    return CompiledPipeline(cfg, (stage1, stage2), time.perf_counter() - t0, qm, m_levels)


def _stage_from_table(name, table, names, bits) -> Stage:
    graphs = tuple(build_characteristic_graph(table, i) for i in range(table.arity))
    colorings = tuple(greedy_color(g) for g in graphs)
    encoders = tuple(build_encoder(c) for c in colorings)
    return Stage(name, tuple(names), tuple(bits), table, graphs, colorings, encoders, build_decoder_lut(table, colorings))


def compile_pipeline(cfg: PipelineConfig) -> CompiledPipeline:
    return compile_simple(cfg) if cfg.mode == "simple" else compile_cascaded(cfg)


def _quantizer_fn(q: Quantizer):
    lo, hi, step, top = q.lo, q.hi, q.step, q.levels - 1
    floor = math.floor

    def qf(v):
        if v < lo:
            return 0
        if v >= hi:
            return top
        k = floor((v - lo) / step)
        return k if k < top else top

    return qf


def _fast_path(p: CompiledPipeline):
    """Inlined quantize/encode/decode chain; same results as the public ops."""
    qe, qi, qd = (_quantizer_fn(q) for q in p.config.source_quantizers)
    out = p.config.output_quantizer
    out_lo, out_step = out.lo, out.step
    bits = p.bits_per_sample
    if p.mode == "simple":
        (st,) = p.stages
        ce, ci, cd = (enc._lookup for enc in st.encoders)
        se, si, _ = st.lut._strides
        flat = st.lut._flat

        def run(e, ei, ed):
            level = flat[ce[qe(e)] * se + ci[qi(ei)] * si + cd[qd(ed)]]
            return out_lo + (level + 0.5) * out_step, bits

        return run
    s1, s2 = p.stages
    ce, ci = (enc._lookup for enc in s1.encoders)
    cm, cd = (enc._lookup for enc in s2.encoders)
    stride1, stride2 = s1.lut._strides[0], s2.lut._strides[0]
    flat1, flat2 = s1.lut._flat, s2.lut._flat

    def run(e, ei, ed):
        m = flat1[ce[qe(e)] * stride1 + ci[qi(ei)]]
        level = flat2[cm[m] * stride2 + cd[qd(ed)]]
        return out_lo + (level + 0.5) * out_step, bits

    return run


def run_sample(p: CompiledPipeline, e: float, ei: float, ed: float) -> tuple[float, int]:
    """Quantize, encode, route and decode one sample; returns (valve %, bits on wire).

    Uses the pipeline's inlined lookup chain; :func:`run_sample_reference`
    goes through the public encode/decode operations instead.
    """
    return p._run(e, ei, ed)


def run_sample_reference(p: CompiledPipeline, e: float, ei: float, ed: float) -> tuple[float, int]:
    qe, qi, qd = p.config.source_quantizers
    se, si, sd = quantize(qe, e), quantize(qi, ei), quantize(qd, ed)
    if p.mode == "simple":
        (st,) = p.stages
        enc_e, enc_i, enc_d = st.encoders
        level = decode(st.lut, (encode(enc_e, se), encode(enc_i, si), encode(enc_d, sd)))
    else:
        s1, s2 = p.stages
        m = decode(s1.lut, (encode(s1.encoders[0], se), encode(s1.encoders[1], si)))
        level = decode(s2.lut, (encode(s2.encoders[0], m), encode(s2.encoders[1], sd)))
    return dequantize(p.config.output_quantizer, level), p.bits_per_sample


def run_levels(p: CompiledPipeline, se, si, sd) -> np.ndarray:
    """Vectorized pipeline on source symbol indices; returns output levels."""
    if p.mode == "simple":
        (st,) = p.stages
        cols = [enc.color_of[np.asarray(s)] for enc, s in zip(st.encoders, (se, si, sd))]
        return st.lut.table[tuple(cols)]
    s1, s2 = p.stages
    m = s1.lut.table[s1.encoders[0].color_of[np.asarray(se)], s1.encoders[1].color_of[np.asarray(si)]]
    return s2.lut.table[s2.encoders[0].color_of[m], s2.encoders[1].color_of[np.asarray(sd)]]


def run_batch(p: CompiledPipeline, e, ei, ed) -> np.ndarray:
    qe, qi, qd = p.config.source_quantizers
    levels = run_levels(p, quantize_array(qe, e), quantize_array(qi, ei), quantize_array(qd, ed))
    q = p.config.output_quantizer
    return q.lo + (levels + 0.5) * q.step


def reference_simple(cfg: PipelineConfig, e: float, ei: float, ed: float) -> float:
    """Direct PID on quantized inputs with a quantized output; no tables."""
    qe, qi, qd = cfg.source_quantizers
    u = eval_pid(
        cfg.gains,
        dequantize(qe, quantize(qe, e)),
        dequantize(qi, quantize(qi, ei)),
        dequantize(qd, quantize(qd, ed)),
    )
    q = cfg.output_quantizer
    return dequantize(q, quantize(q, u))


def reference_cascaded(cfg: PipelineConfig, e: float, ei: float, ed: float, qm: Quantizer | None = None) -> float:
    """Two-stage quantized reference: quantize m, then apply the final law."""
    qm = qm or intermediate_quantizer(cfg)
    intermediate, final = decompose_pid(cfg.gains)
    qe, qi, qd = cfg.source_quantizers
    m = intermediate(dequantize(qe, quantize(qe, e)), dequantize(qi, quantize(qi, ei)))
    m_hat = dequantize(qm, quantize(qm, m))
    u = final(m_hat, dequantize(qd, quantize(qd, ed)))
    q = cfg.output_quantizer
    return dequantize(q, quantize(q, u))


def with_mode(cfg: PipelineConfig, mode: str) -> PipelineConfig:
    return replace(cfg, mode=mode)

"""Offline/online cost measurements and the bit-width sweep."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .chargraph import compression_rate
from .pipeline import MODES, CompiledPipeline, PipelineConfig, compile_pipeline, default_config, run_sample, with_mode

SWEEP_COLUMNS = (
    "bits",
    "mode",
    "offline_ms",
    "online_ns",
    "comp_e",
    "comp_ei",
    "comp_ed",
    "comp_aggregate",
    "lut_entries",
    "bits_per_sample",
)
TIME_FIELDS = ("offline_ms", "online_ns", "offline_samples_ms", "online_iqr_ns")


@dataclass
class OfflineTiming:
    median_s: float
    samples_s: list[float]
    pipeline: CompiledPipeline


def measure_offline(cfg: PipelineConfig, repeats: int = 5) -> OfflineTiming:
    """Median wall-clock compile time over ``repeats`` fresh compilations."""
    samples, p = [], None
    for _ in range(repeats):
        t0 = time.perf_counter()
        p = compile_pipeline(cfg)
        samples.append(time.perf_counter() - t0)
    return OfflineTiming(statistics.median(samples), samples, p)


@dataclass
class OnlineTiming:
    median_ns: float
    iqr_ns: tuple[float, float]
    n_samples: int


def sample_inputs(cfg: PipelineConfig, n: int, seed: int = 0) -> list[tuple[float, float, float]]:
    """Uniform in-range inputs; depends only on the source ranges and seed."""
    rng = np.random.default_rng(seed)
    cols = [rng.uniform(q.lo, q.hi, n) for q in cfg.source_quantizers]
    return list(zip(*(c.tolist() for c in cols)))


def measure_online(
    p: CompiledPipeline,
    n_samples: int = 10_000,
    seed: int = 0,
    block: int = 100,
    rounds: int = 3,
) -> OnlineTiming:
    """Per-sample latency of :func:`run_sample`.

    Samples are timed in blocks of ``block`` calls so timer overhead does
    not swamp the sub-microsecond path; the median and quartiles are taken
    over all block means from ``rounds`` passes over the same stream.
    """
    if n_samples < 10_000:
        raise ValueError("online timing needs at least 10^4 samples")
    xs = sample_inputs(p.config, n_samples, seed)
    per_block = []
    clock = time.perf_counter_ns
    for _ in range(rounds):
        for i in range(0, n_samples, block):
            chunk = xs[i : i + block]
            t0 = clock()
            for e, ei, ed in chunk:
                run_sample(p, e, ei, ed)
            per_block.append((clock() - t0) / len(chunk))
    q1, med, q3 = np.percentile(per_block, [25, 50, 75])
    return OnlineTiming(float(med), (float(q1), float(q3)), n_samples)


@dataclass
class SweepCell:
    bits: int
    mode: str
    offline_ms: float | None = None
    online_ns: float | None = None
    sources: list[dict] = field(default_factory=list)
    comp_aggregate: float | None = None
    lut_entries: int | None = None
    bits_per_sample: int | None = None
    offline_samples_ms: list[float] = field(default_factory=list)
    online_iqr_ns: tuple[float, float] | None = None
    error: str | None = None

    def comp(self, name: str) -> float | None:
        for s in self.sources:
            if s["name"] == name:
                return s["compression_pct"]
        return None

    def row(self) -> dict:
        return {
            "bits": self.bits,
            "mode": self.mode,
            "offline_ms": self.offline_ms,
            "online_ns": self.online_ns,
            "comp_e": self.comp("e"),
            "comp_ei": self.comp("ei"),
            "comp_ed": self.comp("ed"),
            "comp_aggregate": self.comp_aggregate,
            "lut_entries": self.lut_entries,
            "bits_per_sample": self.bits_per_sample,
        }


@dataclass
class SweepReport:
    cells: list[SweepCell]
    seed: int = 0
    config: dict = field(default_factory=dict)

    def cell(self, bits: int, mode: str) -> SweepCell:
        for c in self.cells:
            if c.bits == bits and c.mode == mode:
                return c
        raise KeyError((bits, mode))

    def to_csv(self, with_times: bool = True) -> str:
        buf = io.StringIO()
        cols = [c for c in SWEEP_COLUMNS if with_times or c not in TIME_FIELDS]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for c in self.cells:
            w.writerow({k: _fmt(v) for k, v in c.row().items()})
        return buf.getvalue()

    def to_dict(self, with_times: bool = True) -> dict:
        cells = []
        for c in self.cells:
            d = {
                **c.row(),
                "sources": c.sources,
                "offline_samples_ms": c.offline_samples_ms,
                "online_iqr_ns": list(c.online_iqr_ns) if c.online_iqr_ns else None,
                "error": c.error,
            }
            if not with_times:
                for k in TIME_FIELDS:
                    d.pop(k, None)
            cells.append(d)
        return {"seed": self.seed, "config": self.config, "cells": cells}

    def to_json(self, with_times: bool = True) -> str:
        return json.dumps(self.to_dict(with_times), indent=2, sort_keys=True)

    def best_compression(self) -> tuple[float, SweepCell, str] | None:
        """Highest per-source or aggregate compression seen anywhere in the grid."""
        best = None
        for c in self.cells:
            if c.error:
                continue
            cands = [(s["compression_pct"], s["name"]) for s in c.sources] + [(c.comp_aggregate, "aggregate")]
            for v, name in cands:
                if best is None or v > best[0]:
                    best = (v, c, name)
        return best


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def sweep(
    bits_range=range(4, 9),
    modes=MODES,
    repeats: int = 5,
    n_samples: int = 10_000,
    seed: int = 0,
    base: PipelineConfig | None = None,
    timing: bool = True,
) -> SweepReport:
    """Compile and time every ``(bits, mode)`` cell; failures are recorded per cell."""
    cells = []
    for b in bits_range:
        for mode in modes:
            cell = SweepCell(int(b), mode)
            try:
                cfg = _config_for(b, mode, base)
                if timing:
                    off = measure_offline(cfg, repeats)
                    p = off.pipeline
                    cell.offline_ms = off.median_s * 1e3
                    cell.offline_samples_ms = [s * 1e3 for s in off.samples_s]
                    on = measure_online(p, n_samples, seed)
                    cell.online_ns, cell.online_iqr_ns = on.median_ns, on.iqr_ns
                else:
                    p = compile_pipeline(cfg)
                cell.sources = p.source_metrics()
                cell.comp_aggregate = p.aggregate_compression
                cell.lut_entries = p.lut_entries
                cell.bits_per_sample = p.bits_per_sample
            except Exception as exc:  # keep sweeping; the cell carries the failure
                cell.error = f"{type(exc).__name__}: {exc}"
            cells.append(cell)
    return SweepReport(cells, seed, (base or default_config()).to_dict())


def _config_for(bits: int, mode: str, base: PipelineConfig | None) -> PipelineConfig:
    if base is None:
        return default_config(bits, mode)
    ranges = {n: (q.lo, q.hi) for n, q in zip(("e", "ei", "ed"), base.source_quantizers)}
    out_bits = None if base.output_quantizer.bits == base.bits else base.output_quantizer.bits
    return default_config(bits, mode, output_bits=out_bits, ranges=ranges, gains=base.gains)


def recompute_compression(report_sources: list[dict]) -> list[float]:
    """Compression per source recomputed from dumped colors and probabilities."""
    out = []
    for s in report_sources:
        colors = np.asarray(s["colors"])
        p = np.bincount(colors, weights=np.asarray(s["probabilities"]))
        p = p[p > 0]
        h = float(max(0.0, -(p * np.log2(p)).sum()))
        out.append(compression_rate(h, s["bits"]))
    return out


__all__ = [
    "OfflineTiming",
    "OnlineTiming",
    "SweepCell",
    "SweepReport",
    "measure_offline",
    "measure_online",
    "recompute_compression",
    "sample_inputs",
    "sweep",
    "with_mode",
]

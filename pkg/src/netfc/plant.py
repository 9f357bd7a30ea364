"""Leaking water tank under PID control, with direct or FC controllers.

Mass balance: ``dh/dt = (c1*v - c2*sqrt(h)) / (rho*area)``, integrated with
explicit Euler. Errors follow ``e = h - s``; the controller is fed
``error_sign * (e, ei, ed)``, and the default ``error_sign = -1`` turns that
into reference-minus-measurement, which is the sign under which the
default gains act as negative feedback.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from .functions import PidGains, eval_pid
from .pipeline import (
    SOURCE_NAMES,
    CompiledPipeline,
    PipelineConfig,
    compile_pipeline,
    default_config,
    intermediate_quantizer,
    reference_cascaded,
    reference_simple,
    run_sample,
    with_mode,
)

CONTROLLERS = ("direct", "direct_quantized", "cascaded_quantized", "simple_fc", "cascaded_fc")
CSV_COLUMNS = ("t", "h", "e", "ei", "ed", "valve", "bits")


@dataclass(frozen=True)
class TankParams:
    c1: float = 50.0  # kg/s per % open
    c2: float = 1.0  # kg/s per sqrt(m)
    rho: float = 1000.0  # kg/m^3
    area: float = 1.0  # m^2
    setpoint: float = 10.0  # m
    dt: float = 0.1  # s
    steps: int = 80
    h0: float | None = None  # None starts at the setpoint

    def __post_init__(self):
        for name in ("c1", "c2", "rho", "area", "setpoint", "dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.h0 is not None and self.h0 < 0:
            raise ValueError("h0 must be non-negative")

    @property
    def initial_level(self) -> float:
        return self.setpoint if self.h0 is None else float(self.h0)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["h0"] = self.initial_level
        return d


@dataclass
class LoopState:
    h: float = 0.0
    integral: float = 0.0
    prev_e: float | None = None  # None until the first sample (gives ed(0) = 0)


def step_tank(h: float, valve: float, p: TankParams) -> float:
    return max(0.0, h + p.dt * (p.c1 * valve - p.c2 * math.sqrt(h)) / (p.rho * p.area))


def compute_errors(h: float, s: float, state: LoopState, dt: float) -> tuple[float, float, float]:
    """Proportional, integral (rectangle rule) and derivative (backward) errors."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    e = h - s
    prev = e if state.prev_e is None else state.prev_e
    ei = state.integral + e * dt
    ed = (e - prev) / dt
    state.h, state.integral, state.prev_e = h, ei, e
    return e, ei, ed


@dataclass
class Trajectory:
    controller: str
    t: list[float] = field(default_factory=list)
    h: list[float] = field(default_factory=list)
    e: list[float] = field(default_factory=list)
    ei: list[float] = field(default_factory=list)
    ed: list[float] = field(default_factory=list)
    valve: list[float] = field(default_factory=list)
    bits: list[int] = field(default_factory=list)
    error_sign: float = -1.0

    def __len__(self) -> int:
        return len(self.t)

    def append(self, t, h, e, ei, ed, valve, bits):
        for name, v in zip(CSV_COLUMNS, (t, h, e, ei, ed, valve, bits)):
            getattr(self, name).append(v)

    def controller_inputs(self) -> dict[str, np.ndarray]:
        return {n: self.error_sign * np.asarray(getattr(self, n)) for n in SOURCE_NAMES}

    def to_csv(self, columns=CSV_COLUMNS) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in zip(*(getattr(self, c) for c in columns)):
            w.writerow([repr(v) for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {c: list(getattr(self, c)) for c in CSV_COLUMNS}


def _controller(
    name: str,
    gains: PidGains,
    cfg: PipelineConfig,
    pipeline: CompiledPipeline | None,
) -> Callable[[float, float, float], tuple[float, int]]:
    if name == "direct":
        return lambda e, ei, ed: (eval_pid(gains, e, ei, ed), 0)
    if name == "direct_quantized":
        return lambda e, ei, ed: (reference_simple(cfg, e, ei, ed), 0)
    if name == "cascaded_quantized":
        qm = intermediate_quantizer(cfg)
        return lambda e, ei, ed: (reference_cascaded(cfg, e, ei, ed, qm), 0)
    if name in ("simple_fc", "cascaded_fc"):
        mode = name.split("_")[0]
        if pipeline is None:
            pipeline = compile_pipeline(with_mode(cfg, mode))
        elif pipeline.mode != mode:
            raise ValueError(f"controller {name} needs a {mode} pipeline, got {pipeline.mode}")
        return lambda e, ei, ed: run_sample(pipeline, e, ei, ed)
    raise ValueError(f"unknown controller {name!r}; expected one of {CONTROLLERS}")


def run_closed_loop(
    p: TankParams,
    gains: PidGains | None = None,
    controller: str = "direct",
    cfg: PipelineConfig | None = None,
    pipeline: CompiledPipeline | None = None,
    error_sign: float = -1.0,
) -> Trajectory:
    """Simulate ``p.steps`` control periods; the trajectory has ``steps + 1`` rows.

    ``cfg`` (quantizers) is needed for every controller except ``direct``;
    its gains are replaced by ``gains`` when both are given.
    """
    if pipeline is not None:
        cfg = pipeline.config if cfg is None else cfg
    if cfg is None:
        cfg = default_config(gains=gains)
    if gains is None:
        gains = cfg.gains
    elif cfg.gains != gains:
        cfg = replace(cfg, gains=gains)
        if pipeline is not None and pipeline.config.gains != gains:
            raise ValueError("precompiled pipeline was built with different gains")
    ctrl = _controller(controller, gains, cfg, pipeline)

    traj = Trajectory(controller, error_sign=error_sign)
    state = LoopState(h=p.initial_level)
    h = p.initial_level
    for k in range(p.steps + 1):
        e, ei, ed = compute_errors(h, p.setpoint, state, p.dt)
        valve, bits = ctrl(error_sign * e, error_sign * ei, error_sign * ed)
        traj.append(k * p.dt, h, e, ei, ed, valve, bits)
        h = step_tank(h, valve, p)
    return traj


def calibrate_ranges(traj: Trajectory, margin: float = 0.25) -> dict[str, tuple[float, float]]:
    """Quantizer ranges from a reference run: min/max of each controller input,
    widened by ``margin`` of the span on both sides and rounded outward to 0.1.
    """
    out = {}
    for name, v in traj.controller_inputs().items():
        lo, hi = float(v.min()), float(v.max())
        pad = margin * (hi - lo)
        lo = math.floor(round((lo - pad) * 10, 9)) / 10
        hi = math.ceil(round((hi + pad) * 10, 9)) / 10
        if hi <= lo:
            lo, hi = lo - 0.1, hi + 0.1
        out[name] = (lo, hi)
    return out


def tracking_error(traj: Trajectory, setpoint: float, tail: float = 0.25) -> float:
    """Largest ``|h - setpoint|`` over the final ``tail`` fraction of steps."""
    n = len(traj) - 1
    start = n - int(math.ceil(tail * n)) + 1
    return float(np.max(np.abs(np.asarray(traj.h[start:]) - setpoint)))

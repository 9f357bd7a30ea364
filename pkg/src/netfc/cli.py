"""Command line front end: ``netfc demo|analyze|simulate|sweep``.

Every command that writes files also writes ``manifest.json`` holding the
effective configuration, so ``netfc <cmd> --config manifest.json`` reruns it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import sweep
from .errors import NfcError
from .functions import PidGains
from .modsum import mismatches, run_example
from .pipeline import MODES, compile_pipeline, default_config, run_sample
from .plant import TankParams, calibrate_ranges, run_closed_loop, tracking_error
from .svg import bar_panel, document, line_panel

EXIT_OK, EXIT_USAGE, EXIT_COMPILE, EXIT_MISMATCH = 0, 1, 2, 3
SIM_CONTROLLERS = ("direct", "direct_quantized", "simple_fc", "cascaded_fc", "both")

# built-in values used when neither a flag nor the config file sets an option
DEFAULTS = {
    "mode": "simple",
    "bits": 7,
    "output_bits": None,
    "intermediate_bits": None,
    "gains": [-0.5, 10.0, 90.0],
    "range_e": None,
    "range_ei": None,
    "range_ed": None,
    "calibrate": False,
    "steps": 80,
    "dt": 0.1,
    "setpoint": 10.0,
    "h0": None,
    "area": 1.0,
    "controller": "both",
    "seed": 0,
    "out": None,
    "format": "csv",
    "dump_lut": False,
    "bits_range": [4, 8],
    "repeats": 5,
    "samples": 10_000,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _gains(s: str) -> list[float]:
    parts = s.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected kp,ki,kd")
    return [float(p) for p in parts]


def _range(s: str) -> list[float]:
    lo, sep, hi = s.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected lo:hi")
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"need lo < hi, got {s}")
    return [lo, hi]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netfc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"netfc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file of option values; flags win")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("csv", "json"))

    pipe = _Parser(add_help=False)
    pipe.add_argument("--mode", choices=(*MODES, "both"))
    pipe.add_argument("--bits", type=int, help="bits per source")
    pipe.add_argument("--output-bits", type=int, help="valve quantizer bits (default: --bits)")
    pipe.add_argument("--intermediate-bits", type=int, help="node m quantizer bits (default: --bits)")
    pipe.add_argument("--gains", type=_gains, metavar="KP,KI,KD")
    for name in ("e", "ei", "ed"):
        pipe.add_argument(f"--range-{name}", type=_range, metavar="LO:HI")
    pipe.add_argument("--calibrate", action="store_true", default=None,
                      help="derive source ranges from a direct-control reference run")

    tank = _Parser(add_help=False)
    tank.add_argument("--steps", type=int)
    tank.add_argument("--dt", type=float)
    tank.add_argument("--setpoint", type=float)
    tank.add_argument("--h0", type=float, help="initial level in m (default: setpoint)")
    tank.add_argument("--area", type=float, help="tank cross-section in m^2")

    sub.add_parser("demo", parents=[common], help="two-source mod-sum worked example")
    p = sub.add_parser("analyze", parents=[common, pipe, tank], help="compile a pipeline and report")
    p.add_argument("--dump-lut", action="store_true", default=None)
    p = sub.add_parser("simulate", parents=[common, pipe, tank], help="closed-loop water tank run")
    p.add_argument("--controller", choices=SIM_CONTROLLERS)
    p = sub.add_parser("sweep", parents=[common, pipe, tank], help="bit-width sweep with timings")
    p.add_argument("--bits-range", type=lambda s: [int(v) for v in _range(s)], metavar="LO:HI")
    p.add_argument("--repeats", type=int)
    p.add_argument("--samples", type=int)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, the config file, then explicit flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        loaded = loaded.get("options", loaded)
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        opts.update(loaded)
    for key, val in vars(args).items():
        if key in DEFAULTS and val is not None:
            opts[key] = val
    return opts


def tank_params(o: dict) -> TankParams:
    return TankParams(setpoint=o["setpoint"], dt=o["dt"], steps=o["steps"], h0=o["h0"], area=o["area"])


def effective_ranges(o: dict) -> dict[str, list[float]]:
    ranges = {}
    if o["calibrate"]:
        ref = run_closed_loop(tank_params(o), PidGains(*o["gains"]), "direct")
        ranges = {k: list(v) for k, v in calibrate_ranges(ref).items()}
    for name in ("e", "ei", "ed"):
        if o[f"range_{name}"] is not None:
            ranges[name] = list(o[f"range_{name}"])
    cfg = default_config(ranges={k: tuple(v) for k, v in ranges.items()})
    return {n: [q.lo, q.hi] for n, q in zip(("e", "ei", "ed"), cfg.source_quantizers)}


def pipeline_config(o: dict, mode: str, bits: int | None = None):
    return default_config(
        bits or o["bits"],
        mode,
        output_bits=o["output_bits"],
        ranges={k: tuple(v) for k, v in o["ranges"].items()},
        gains=PidGains(*o["gains"]),
        intermediate_bits=o["intermediate_bits"],
    )


def _out_dir(o: dict) -> Path | None:
    if o["out"] is None:
        return None
    d = Path(o["out"])
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_manifest(d: Path | None, command: str, o: dict, extra: dict | None = None):
    if d is None:
        return
    options = {k: (str(v) if isinstance(v, Path) else v) for k, v in o.items() if k in DEFAULTS}
    manifest = {"command": command, "version": __version__, "options": options}
    if "ranges" in o:
        manifest["effective_ranges"] = o["ranges"]
    manifest.update(extra or {})
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _modes(o: dict) -> tuple[str, ...]:
    return MODES if o["mode"] == "both" else (o["mode"],)


def cmd_demo(o: dict) -> int:
    rep = run_example()
    for name in "xy":
        r = rep[name]
        print(f"source {name}: colors={r['colors']} H_G({name})={r['entropy_bits']:.6g} bits "
              f"compression={r['compression_pct']:.6g}% codeword={r['codeword_len']} bit(s)")
    print(f"decoding table (color_x, color_y) -> f: {rep['lut']}")
    d = _out_dir(o)
    if d is not None:
        (d / "demo.json").write_text(json.dumps({k: v for k, v in rep.items() if k != "dot"}, indent=2) + "\n")
        (d / "demo.dot").write_text(rep["dot"])
        _write_manifest(d, "demo", o)
    bad = mismatches(rep)
    for line in bad:
        print(f"MISMATCH {line}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_analyze(o: dict) -> int:
    d = _out_dir(o)
    reports = {}
    for mode in _modes(o):
        p = compile_pipeline(pipeline_config(o, mode))
        rep = p.report(include_colorings=True)
        reports[mode] = rep
        print(f"[{mode}] bits={p.config.bits} links={p.link_bits} lut_entries={p.lut_entries} "
              f"aggregate={p.aggregate_compression:.2f}%")
        for s in rep["sources"]:
            print(f"  {s['name']:>2}: colors={s['num_colors']} H={s['entropy_bits']:.4f} bits "
                  f"compression={s['compression_pct']:.2f}%")
        if d is not None:
            (d / f"analysis_{mode}.json").write_text(json.dumps(rep, indent=2, sort_keys=True) + "\n")
            if o["dump_lut"]:
                for st in p.stages:
                    stem = d / f"lut_{mode}_{st.name}"
                    stem.with_suffix(".bin").write_bytes(st.lut.to_bytes())
                    if o["format"] == "json":
                        stem.with_suffix(".json").write_text(json.dumps(st.lut.to_json()) + "\n")
    _write_manifest(d, "analyze", o)
    return EXIT_OK


def cmd_simulate(o: dict) -> int:
    d = _out_dir(o)
    params = tank_params(o)
    gains = PidGains(*o["gains"])
    controllers = ("simple_fc", "cascaded_fc") if o["controller"] == "both" else (o["controller"],)
    trajs, pipes = {}, {}
    for c in controllers:
        pipe = None
        if c.endswith("_fc"):
            pipe = pipes[c] = compile_pipeline(pipeline_config(o, c.split("_")[0]))
        cfg = pipeline_config(o, "simple")
        trajs[c] = run_closed_loop(params, gains, c, cfg=cfg, pipeline=pipe)
        print(f"{c}: final h={trajs[c].h[-1]:.4f} m, max |h-s| over last 25% = "
              f"{tracking_error(trajs[c], params.setpoint):.4f} m, bits/sample={trajs[c].bits[-1]}")
    if d is not None:
        for c, tr in trajs.items():
            if o["format"] == "json":
                (d / f"trajectory_{c}.json").write_text(json.dumps(tr.to_dict()) + "\n")
            else:
                (d / f"trajectory_{c}.csv").write_text(tr.to_csv())
        if o["controller"] == "both":
            (d / "trajectory_both.csv").write_text(_comparison_csv(trajs, pipes["cascaded_fc"]))
        (d / "simulation.svg").write_text(_trajectory_svg(trajs))
    _write_manifest(d, "simulate", o, {"tank": params.to_dict()})
    return EXIT_OK


def _comparison_csv(trajs: dict, cascaded) -> str:
    s, c = trajs["simple_fc"], trajs["cascaded_fc"]
    lines = ["t,h_simple,h_cascaded,valve_simple,valve_cascaded,valve_diff,valve_diff_same_input"]
    for k in range(len(s)):
        inputs = [s.error_sign * v for v in (s.e[k], s.ei[k], s.ed[k])]
        same = s.valve[k] - run_sample(cascaded, *inputs)[0]
        row = (s.t[k], s.h[k], c.h[k], s.valve[k], c.valve[k], s.valve[k] - c.valve[k], same)
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def _trajectory_svg(trajs: dict) -> str:
    panels = [
        line_panel({c: (tr.t, tr.h) for c, tr in trajs.items()}, "Water level", "t [s]", "h [m]"),
        line_panel({c: (tr.t, tr.valve) for c, tr in trajs.items()}, "Valve opening", "t [s]", "valve [%]", 260),
    ]
    if "simple_fc" in trajs and "cascaded_fc" in trajs:
        s, c = trajs["simple_fc"], trajs["cascaded_fc"]
        diff = [a - b for a, b in zip(s.valve, c.valve)]
        panels.append(line_panel({"simple - cascaded": (s.t, diff)}, "Valve difference", "t [s]", "[%]", 520))
    else:
        panels.append(line_panel({c: (tr.t, tr.e) for c, tr in trajs.items()}, "Error h - s", "t [s]", "e [m]", 520))
    return document(panels)


def cmd_sweep(o: dict) -> int:
    d = _out_dir(o)
    lo, hi = o["bits_range"]
    rep = sweep(
        range(lo, hi + 1),
        _modes(o),
        repeats=o["repeats"],
        n_samples=o["samples"],
        seed=o["seed"],
        base=pipeline_config(o, "simple"),
    )
    for c in rep.cells:
        if c.error:
            print(f"b={c.bits} {c.mode}: FAILED {c.error}")
            continue
        flag = " NEGATIVE" if min([c.comp_aggregate] + [s["compression_pct"] for s in c.sources]) < 0 else ""
        comps = ", ".join("%s:%.1f" % (s["name"], s["compression_pct"]) for s in c.sources)
        print(f"b={c.bits} {c.mode:>8}: offline={c.offline_ms:.2f} ms online={c.online_ns:.0f} ns "
              f"lut={c.lut_entries} bits/sample={c.bits_per_sample} comp=[{comps}] "
              f"aggregate={c.comp_aggregate:.1f}%{flag}")
    best = rep.best_compression()
    if best:
        v, cell, name = best
        print(f"best compression: {v:.2f}% ({name}, b={cell.bits}, {cell.mode})")
    if d is not None:
        (d / "sweep.csv").write_text(rep.to_csv())
        (d / "sweep.json").write_text(rep.to_json() + "\n")
        ok = [c for c in rep.cells if not c.error]
        bits = sorted({c.bits for c in ok})
        modes = [m for m in MODES if any(c.mode == m for c in ok)]

        def series(attr):
            return {m: [getattr(rep.cell(b, m), attr) for b in bits] for m in modes}

        (d / "offline_time.svg").write_text(document([bar_panel(bits, series("offline_ms"), "Offline time", "bits", "ms")]))
        (d / "online_time.svg").write_text(document([bar_panel(bits, series("online_ns"), "Online time", "bits", "ns/sample")]))
        (d / "compression.svg").write_text(
            document([bar_panel(bits, series("comp_aggregate"), "Aggregate compression", "bits", "%")])
        )
        (d / "lut_entries.svg").write_text(document([bar_panel(bits, series("lut_entries"), "LUT entries", "bits", "entries")]))
    _write_manifest(d, "sweep", o)
    return EXIT_OK if not any(c.error for c in rep.cells) else EXIT_COMPILE


COMMANDS = {"demo": cmd_demo, "analyze": cmd_analyze, "simulate": cmd_simulate, "sweep": cmd_sweep}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits on bad usage and on --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        o = resolve(args)
        if args.command != "demo":
            o["ranges"] = effective_ranges(o)
        return COMMANDS[args.command](o)
    except UsageError as exc:
        print(f"netfc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NfcError, ValueError) as exc:
        print(f"netfc: compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE


if __name__ == "__main__":
    sys.exit(main())

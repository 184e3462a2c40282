"""Command-line interface.

    knr pn      --chi 20 --delta 0 --omega 5
    knr mean    --chi 2 --delta -35 --omega 20 --engine both
    knr g2      --config point.cfg --delta -20
    knr wigner  --chi 20 --omega 5 --out w.csv
    knr sweep   --chi 20 --omega 5 --vary delta --start -80 --stop 40 --steps 241 --out s.csv
    knr preset  fig3b --out fig3b.csv
    knr compare fig3b --out fig3b_both.csv

A ``--config`` file holds ``key = value`` lines (``#`` starts a comment)
with the long option names without dashes; options on the command line win.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import analytic, oracle
from .errors import KnrError
from .model import KnrParams
from .sweep import (
    N_POPULATIONS,
    OBSERVABLES,
    Axis,
    Engine,
    SweepSpec,
    Variable,
    dumps,
    export,
    export_wigner,
    figure_preset,
    run_sweep,
)

_VARIABLES = {"delta": Variable.DETUNING, "omega": Variable.DRIVE, "chi": Variable.NONLINEARITY}
_DEFAULTS = {"chi": None, "delta": 0.0, "omega": 0.0, "gamma": 1.0, "nbath": 0.0,
             "engine": "analytic", "format": "csv"}


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file into a dict of strings."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value file with defaults for these options")
    p.add_argument("--chi", type=float, help="Kerr nonlinearity, units of gamma")
    p.add_argument("--delta", type=float, help="detuning omega_0 - omega, units of gamma")
    p.add_argument("--omega", type=float, help="drive amplitude, units of gamma")
    p.add_argument("--gamma", type=float, help="energy decay rate (default 1)")
    p.add_argument("--nbath", type=float, help="bath occupation (oracle only)")
    p.add_argument("--engine", choices=[e.value for e in Engine])
    p.add_argument("--out", help="output file (default: print to stdout)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--workers", type=int, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knr", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("pn", "photon-number distribution at one point"),
                        ("mean", "mean photon number at one point"),
                        ("g2", "zero-delay g2 at one point")):
        _add_common(sub.add_parser(name, help=help_))

    w = sub.add_parser("wigner", help="Wigner function on a grid")
    _add_common(w)
    w.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    w.add_argument("--resolution", type=int, nargs=2, metavar=("NX", "NY"))

    s = sub.add_parser("sweep", help="sweep one or two parameters")
    _add_common(s)
    s.add_argument("--vary", choices=sorted(_VARIABLES))
    s.add_argument("--start", type=float)
    s.add_argument("--stop", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--vary2", choices=sorted(_VARIABLES))
    s.add_argument("--start2", type=float)
    s.add_argument("--stop2", type=float)
    s.add_argument("--steps2", type=int)
    s.add_argument("--observables", help="comma list from " + ",".join(OBSERVABLES[:-1]))

    pr = sub.add_parser("preset", help="run a figure preset")
    pr.add_argument("id")
    _add_common(pr)

    c = sub.add_parser("compare", help="run a preset or a point with both engines")
    c.add_argument("id", nargs="?")
    _add_common(c)
    return parser


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then from built-in defaults."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, value in vars(args).copy().items():
        if value is not None or key in ("command", "config"):
            continue
        if key in cfg:
            raw = cfg[key]
            if key in ("window", "resolution"):
                kind = int if key == "resolution" else float
                setattr(args, key, [kind(v) for v in raw.replace(",", " ").split()])
            elif key in ("steps", "steps2", "workers"):
                setattr(args, key, int(raw))
            elif key in ("chi", "delta", "omega", "gamma", "nbath", "start", "stop",
                         "start2", "stop2"):
                setattr(args, key, float(raw))
            else:
                setattr(args, key, raw)
        elif key in _DEFAULTS:
            setattr(args, key, _DEFAULTS[key])
    return args


def _params(args) -> KnrParams:
    if args.chi is None:
        raise SystemExit("error: --chi is required (on the command line or in --config)")
    return KnrParams(chi=args.chi, delta=args.delta, omega_drive=args.omega,
                     gamma=args.gamma, n_bath=args.nbath)


def _emit(result, args) -> None:
    if args.out:
        export(result, args.format, args.out)
        return
    sys.stdout.write(dumps(result, args.format))


def _point(args, observables) -> None:
    p = _params(args)
    engine = Engine(args.engine)
    if args.out:
        spec = SweepSpec(axes=(), fixed=p, observables=observables, engine=engine)
        export(run_sweep(spec, workers=1), args.format, args.out)
        return
    values = {}
    for member in engine.members:
        if member is Engine.ANALYTIC:
            probs = analytic.photon_distribution(p).probs
            mean = analytic.mean_photon_number(p)
            g2 = _safe(lambda: analytic.g2_zero_delay(p))
        else:
            obs = oracle.oracle_observables(oracle.steady_state(p))
            probs, mean, g2 = obs.probs, obs.mean_n, _safe(lambda: obs.g2)
        values[member] = (probs, mean, g2)
        if args.command == "compare":
            continue
        if args.command == "pn":
            print(f"# {member.value}")
            for n, v in enumerate(probs):
                print(f"{n}\t{v:.17g}")
        elif args.command == "mean":
            print(f"{member.value}\t{mean:.17g}")
        else:
            print(f"{member.value}\t{g2:.17g}")
    if args.command == "compare":
        _print_comparison(values[Engine.ANALYTIC], values[Engine.ORACLE])


def _print_comparison(a, o) -> None:
    print("quantity\tanalytic\toracle\tabs_diff")
    rows = [(f"p{n}", _at(a[0], n), _at(o[0], n)) for n in range(N_POPULATIONS)]
    rows += [("mean_n", a[1], o[1]), ("g2", a[2], o[2])]
    for name, x, y in rows:
        print(f"{name}\t{x:.17g}\t{y:.17g}\t{abs(x - y):.3g}")


def _at(probs, n) -> float:
    return float(probs[n]) if n < len(probs) else 0.0


def _safe(fn):
    try:
        return fn()
    except KnrError:
        return math.nan


def _wigner(args) -> None:
    p = _params(args)
    window = tuple(args.window) if args.window else analytic.DEFAULT_WINDOW
    resolution = tuple(args.resolution) if args.resolution else analytic.DEFAULT_RESOLUTION
    engine = Engine(args.engine)
    for member in engine.members:
        if member is Engine.ANALYTIC:
            grid = analytic.wigner(p, window, resolution)
        else:
            grid = oracle.oracle_wigner(oracle.steady_state(p), window, resolution)
        out = args.out
        if out and len(engine.members) > 1:
            path = Path(out)
            out = path.with_name(f"{path.stem}_{member.value}{path.suffix}")
        if out:
            export_wigner(grid, out)
        else:
            print(json.dumps({"engine": member.value, "norm_estimate": grid.norm_estimate,
                              "max": float(grid.values.max()),
                              "min": float(grid.values.min())}))


def _sweep(args) -> None:
    if args.vary is None or args.start is None or args.stop is None or args.steps is None:
        raise SystemExit("error: sweep needs --vary, --start, --stop and --steps")
    axes = [Axis(_VARIABLES[args.vary], args.start, args.stop, args.steps)]
    if args.vary2:
        axes.append(Axis(_VARIABLES[args.vary2], args.start2, args.stop2, args.steps2))
    obs = tuple(o.strip().upper() for o in (args.observables or "P0,P1,P2,P3,MEAN_N,G2").split(","))
    spec = SweepSpec(axes=tuple(axes), fixed=_params(args), observables=obs,
                     engine=Engine(args.engine))
    _emit(run_sweep(spec, workers=args.workers), args)


def _preset(args, engine: Engine | None = None) -> None:
    spec = figure_preset(args.id)
    engine = engine or Engine(args.engine)
    spec = SweepSpec(axes=spec.axes, fixed=spec.fixed, observables=spec.observables,
                     engine=engine, curves=spec.curves, label=spec.label)
    _emit(run_sweep(spec, workers=args.workers), args)


def main(argv=None) -> int:
    args = _resolve(build_parser().parse_args(argv))
    try:
        if args.command in ("pn", "mean", "g2"):
            _point(args, ("P0", "P1", "P2", "P3", "MEAN_N", "G2"))
        elif args.command == "wigner":
            _wigner(args)
        elif args.command == "sweep":
            _sweep(args)
        elif args.command == "preset":
            _preset(args)
        elif args.command == "compare":
            if args.id:
                _preset(args, Engine.BOTH)
            else:
                args.engine = Engine.BOTH.value
                _point(args, ("P0", "P1", "P2", "P3", "MEAN_N", "G2"))
    except KnrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Parameter sweeps over detuning, drive and nonlinearity, figure presets, export.

A sweep evaluates one or both engines (closed form, master-equation oracle)
on a rectangular grid of up to two swept parameters, optionally repeated for
several "curves" that override fixed parameters (e.g. three values of chi).
Failures at individual points are recorded in the row, never raised.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, analytic, oracle
from .errors import KnrError, UnknownPreset
from .model import KnrParams

__all__ = [
    "Variable",
    "Engine",
    "Axis",
    "SweepSpec",
    "PointResult",
    "SweepRow",
    "Peak",
    "SweepResult",
    "OBSERVABLES",
    "CSV_COLUMNS",
    "run_sweep",
    "detect_peaks",
    "figure_preset",
    "PRESETS",
    "dumps",
    "export",
    "export_wigner",
    "read_csv",
]

N_POPULATIONS = 10
OBSERVABLES = tuple(f"P{n}" for n in range(N_POPULATIONS)) + ("MEAN_N", "G2", "WIGNER")
CSV_COLUMNS = (
    ["delta_over_gamma", "omega_over_gamma", "chi_over_gamma"]
    + [f"p{n}" for n in range(N_POPULATIONS)]
    + ["mean_n", "g2", "engine", "converged", "max_discrepancy"]
)


class Variable(enum.Enum):
    DETUNING = "delta"
    DRIVE = "omega_drive"
    NONLINEARITY = "chi"


class Engine(enum.Enum):
    ANALYTIC = "analytic"
    ORACLE = "oracle"
    BOTH = "both"

    @property
    def members(self) -> tuple["Engine", ...]:
        if self is Engine.BOTH:
            return (Engine.ANALYTIC, Engine.ORACLE)
        return (self,)


@dataclass(frozen=True)
class Axis:
    variable: Variable
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("a swept axis needs at least 2 steps")
        if self.start == self.stop:
            raise ValueError("a swept axis needs start != stop")

    def value(self, i: int) -> float:
        # computed per index; no accumulated summation
        return self.start + i * (self.stop - self.start) / (self.steps - 1)

    def values(self) -> np.ndarray:
        return np.array([self.value(i) for i in range(self.steps)])

    def to_dict(self) -> dict:
        return {"variable": self.variable.name, "start": self.start,
                "stop": self.stop, "steps": self.steps}


@dataclass(frozen=True)
class SweepSpec:
    """What to evaluate and where.

    ``curves`` holds parameter overrides applied on top of ``fixed``, one
    full grid per curve; ``()`` means a single curve with no overrides.
    """

    axes: tuple[Axis, ...]
    fixed: KnrParams
    observables: tuple[str, ...] = ("MEAN_N",)
    engine: Engine = Engine.ANALYTIC
    curves: tuple[tuple[tuple[str, float], ...], ...] = ()
    label: str = ""

    def __post_init__(self):
        if len(self.axes) > 2:
            raise ValueError("at most two swept variables")
        if len({a.variable for a in self.axes}) != len(self.axes):
            raise ValueError("each variable can be swept only once")
        unknown = set(self.observables) - set(OBSERVABLES)
        if unknown:
            raise ValueError(f"unknown observables {sorted(unknown)}")
        if "WIGNER" in self.observables and (self.axes or len(self.curves) > 1):
            raise ValueError("WIGNER is only available for single-point specs")

    @property
    def curve_list(self) -> tuple[dict, ...]:
        return tuple(dict(c) for c in self.curves) or ({},)

    def grid(self) -> list[KnrParams]:
        """Parameter points in row order: curve, then first axis, then second."""
        points = []
        for curve in self.curve_list:
            base = self.fixed.replace(**curve)
            if not self.axes:
                points.append(base)
                continue
            first = self.axes[0]
            for i in range(first.steps):
                p = base.replace(**{first.variable.value: first.value(i)})
                if len(self.axes) == 1:
                    points.append(p)
                    continue
                second = self.axes[1]
                for j in range(second.steps):
                    points.append(p.replace(**{second.variable.value: second.value(j)}))
        return points

    def to_dict(self) -> dict:
        f = self.fixed
        return {
            "label": self.label,
            "axes": [a.to_dict() for a in self.axes],
            "fixed": {"chi": f.chi, "delta": f.delta, "omega": f.omega_drive,
                      "gamma": f.gamma, "nbath": f.n_bath},
            "curves": [dict(c) for c in self.curves],
            "observables": list(self.observables),
            "engine": self.engine.name,
        }


@dataclass(frozen=True)
class PointResult:
    probs: tuple[float, ...]  # P0 .. P9
    mean_n: float
    g2: float
    converged: bool
    error: str = ""


@dataclass(frozen=True)
class SweepRow:
    index: int
    params: KnrParams
    results: dict  # Engine -> PointResult
    max_discrepancy: float = math.nan


@dataclass(frozen=True)
class Peak:
    observable: str
    engine: Engine
    curve: int
    position: float
    height: float


@dataclass
class SweepResult:
    spec: SweepSpec
    header: dict
    rows: list[SweepRow]
    peaks: list[Peak] = field(default_factory=list)
    wigner: dict = field(default_factory=dict)  # Engine -> WignerGrid

    def column(self, observable: str, engine: Engine = Engine.ANALYTIC, curve: int = 0) -> np.ndarray:
        """Values of one observable along the rows of one curve."""
        per_curve = len(self.rows) // len(self.spec.curve_list)
        rows = self.rows[curve * per_curve:(curve + 1) * per_curve]
        return np.array([_observable_value(r.results[engine], observable) for r in rows])

    def axis_values(self, k: int = 0) -> np.ndarray:
        return self.spec.axes[k].values()


def _observable_value(res: PointResult, name: str) -> float:
    if name == "MEAN_N":
        return res.mean_n
    if name == "G2":
        return res.g2
    return res.probs[int(name[1:])]


def _failed(exc: Exception) -> PointResult:
    nan = math.nan
    return PointResult(probs=(nan,) * N_POPULATIONS, mean_n=nan, g2=nan, converged=False,
                       error=f"{type(exc).__name__}: {exc}")


def _analytic_point(p: KnrParams):
    dist = analytic.photon_distribution(p)
    mean = analytic.mean_photon_number(p)
    try:
        g2 = analytic.g2_zero_delay(p)
    except KnrError:
        g2 = math.nan
    res = PointResult(probs=tuple(float(v) for v in dist.padded(N_POPULATIONS)),
                      mean_n=mean, g2=g2, converged=True)
    return res, dist.probs


def _oracle_point(p: KnrParams, cfg: oracle.OracleConfig):
    rho = oracle.steady_state(p, cfg)
    obs = oracle.oracle_observables(rho)
    try:
        g2 = obs.g2
    except KnrError:
        g2 = math.nan
    padded = np.zeros(max(N_POPULATIONS, rho.dim))
    padded[: rho.dim] = obs.probs
    res = PointResult(probs=tuple(float(v) for v in padded[:N_POPULATIONS]),
                      mean_n=obs.mean_n, g2=g2, converged=True)
    return res, obs.probs


def _evaluate(task):
    index, p, engine, oracle_cfg = task
    results = {}
    full = {}
    for member in engine.members:
        try:
            if member is Engine.ANALYTIC:
                results[member], full[member] = _analytic_point(p)
            else:
                results[member], full[member] = _oracle_point(p, oracle_cfg)
        except (KnrError, ArithmeticError, ValueError) as exc:
            results[member] = _failed(exc)
    disc = math.nan
    if len(full) == 2:
        a, o = full[Engine.ANALYTIC], full[Engine.ORACLE]
        size = max(len(a), len(o))
        disc = float(np.abs(np.pad(a, (0, size - len(a))) - np.pad(o, (0, size - len(o)))).max())
    return SweepRow(index=index, params=p, results=results, max_discrepancy=disc)


def detect_peaks(column, axis) -> list[tuple[float, float]]:
    """Interior local maxima of ``column`` sampled on ``axis``.

    Strict maxima are refined with the parabola through the three bracketing
    samples; flat tops report the midpoint of the plateau. NaNs never form
    part of a peak.
    """
    y = np.asarray(column, dtype=float)
    x = np.asarray(axis, dtype=float)
    if y.shape != x.shape or y.size < 3:
        raise ValueError("column and axis must have the same length >= 3")
    peaks = []
    i = 1
    n = y.size
    while i < n - 1:
        if not np.isfinite(y[i]) or not (y[i] > y[i - 1]):
            i += 1
            continue
        j = i
        while j + 1 < n and y[j + 1] == y[i]:
            j += 1
        if j + 1 < n and y[j + 1] < y[i]:
            if j > i:
                peaks.append((0.5 * (x[i] + x[j]), float(y[i])))
            else:
                peaks.append(_parabola_vertex(x[i - 1:i + 2], y[i - 1:i + 2]))
        i = j + 1
    return peaks


def _parabola_vertex(x, y) -> tuple[float, float]:
    (x0, x1, x2), (y0, y1, y2) = x, y
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    curv = (d12 - d01) / (x2 - x0)  # leading coefficient
    if curv >= 0:
        return float(x1), float(y1)
    # vertex of y0 + d01 (x - x0) + curv (x - x0)(x - x1)
    xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv)
    yv = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1)
    return float(xv), float(yv)


def _find_peaks(result: SweepResult) -> list[Peak]:
    spec = result.spec
    if len(spec.axes) != 1:
        return []
    xs = spec.axes[0].values()
    out = []
    for engine in spec.engine.members:
        for c in range(len(spec.curve_list)):
            for obs in spec.observables:
                if obs == "WIGNER":
                    continue
                for pos, height in detect_peaks(result.column(obs, engine, c), xs):
                    out.append(Peak(obs, engine, c, pos, height))
    return out


def run_sweep(spec: SweepSpec, *, workers: int | None = None,
              oracle_cfg: oracle.OracleConfig = oracle.OracleConfig(),
              wigner_window=analytic.DEFAULT_WINDOW,
              wigner_resolution=analytic.DEFAULT_RESOLUTION) -> SweepResult:
    """Evaluate ``spec`` on its full grid.

    Rows are computed by a process pool (``workers`` processes, default one
    per core; ``workers=1`` runs inline) and returned in grid order. For
    ``Engine.BOTH`` each row also carries the largest population difference
    between the engines.
    """
    tasks = [(i, p, spec.engine, oracle_cfg) for i, p in enumerate(spec.grid())]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(tasks) < 32:
        rows = [_evaluate(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(tasks) // (8 * workers))
            rows = list(pool.map(_evaluate, tasks, chunksize=chunk))

    header = {
        "package": "knr",
        "version": __version__,
        "engines": {
            "analytic": "closed-form 0F2 series, lambda = (gamma/2 + i delta)/(i chi)",
            "oracle": "truncated-Fock Lindblad steady state, sparse LU",
        },
        "spec": spec.to_dict(),
    }
    result = SweepResult(spec=spec, header=header, rows=rows)
    result.peaks = _find_peaks(result)
    if "WIGNER" in spec.observables:
        p = rows[0].params
        for member in spec.engine.members:
            try:
                if member is Engine.ANALYTIC:
                    grid = analytic.wigner(p, wigner_window, wigner_resolution)
                else:
                    rho = oracle.steady_state(p, oracle_cfg)
                    grid = oracle.oracle_wigner(rho, wigner_window, wigner_resolution)
            except KnrError:
                continue
            result.wigner[member] = grid
    return result


# --- presets -----------------------------------------------------------------

_POP4 = ("P0", "P1", "P2", "P3")
_POP10 = tuple(f"P{n}" for n in range(N_POPULATIONS))
_DET = Axis(Variable.DETUNING, -80.0, 40.0, 241)
_DET_2D = Axis(Variable.DETUNING, -80.0, 40.0, 121)
_DRIVE_2D = Axis(Variable.DRIVE, 0.0, 25.0, 121)


def _spec(label, axes, fixed, observables, curves=()):
    return SweepSpec(axes=tuple(axes), fixed=fixed, observables=tuple(observables),
                     curves=tuple(tuple(c.items()) for c in curves), label=label)


def _build_presets() -> dict:
    p = {}
    for sub, chi in (("a", 2.0), ("b", 20.0)):
        p[f"fig1{sub}"] = _spec(f"fig1{sub}", [_DET_2D, _DRIVE_2D],
                                KnrParams(chi=chi), ["MEAN_N"])
    fig2_fixed = KnrParams(chi=2.0, omega_drive=10.0)
    p["fig2a"] = _spec("fig2a", [_DET], fig2_fixed, _POP10)
    p["fig2b"] = _spec("fig2b", [Axis(Variable.DETUNING, -40.0, 0.0, 5)], fig2_fixed, _POP10)
    fig3_curves = [{"omega_drive": 5.0}, {"omega_drive": 20.0}]
    for sub, obs in zip("abcd", _POP4):
        p[f"fig3{sub}"] = _spec(f"fig3{sub}", [_DET], KnrParams(chi=20.0), [obs], fig3_curves)
    fig4 = dict(axes=[Axis(Variable.NONLINEARITY, 1.0, 40.0, 241)],
                fixed=KnrParams(chi=20.0, delta=-20.0, omega_drive=20.0))
    fig5 = dict(axes=[Axis(Variable.DRIVE, 0.0, 40.0, 241)],
                fixed=KnrParams(chi=20.0, delta=-20.0))
    for fig, kw in (("fig4", fig4), ("fig5", fig5)):
        p[f"{fig}a"] = _spec(f"{fig}a", observables=["P0", "P1"], **kw)
        p[f"{fig}b"] = _spec(f"{fig}b", observables=["P2", "P3"], **kw)
    for sub, obs in zip("abcd", _POP4):
        p[f"fig6{sub}"] = _spec(f"fig6{sub}", [_DET_2D, _DRIVE_2D], KnrParams(chi=20.0), [obs])
    fig7_curves = [{"chi": 2.0}, {"chi": 10.0}, {"chi": 20.0}]
    fig7_fixed = KnrParams(chi=20.0, omega_drive=20.0)
    p["fig7a"] = _spec("fig7a", [_DET], fig7_fixed, ["G2"], fig7_curves)
    p["fig7b"] = _spec("fig7b", [_DET], fig7_fixed, ["MEAN_N"], fig7_curves)
    for fig, fixed in (("fig8", KnrParams(chi=20.0, delta=0.0, omega_drive=5.0)),
                       ("fig9", KnrParams(chi=20.0, delta=-40.0, omega_drive=20.0))):
        p[f"{fig}a"] = _spec(f"{fig}a", [], fixed, ["WIGNER"])
        p[f"{fig}b"] = _spec(f"{fig}b", [], fixed, _POP10)
    # whole figures: union of their panels' observables
    for fig in ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"):
        panels = [v for k, v in p.items() if k[:-1] == fig]
        first = panels[0]
        if fig in ("fig1", "fig2"):
            continue  # panels differ in their grids
        obs = []
        for panel in panels:
            obs += [o for o in panel.observables if o not in obs]
        p[fig] = SweepSpec(axes=first.axes, fixed=first.fixed, observables=tuple(obs),
                           curves=first.curves, label=fig)
    return p


PRESETS = _build_presets()


def figure_preset(preset_id: str) -> SweepSpec:
    """Named sweep, a whole figure (``"fig3"``) or one panel (``"fig3b"``).

    Grids: 241 points for 1D sweeps, 121 x 121 for 2D. Ranges: detuning
    [-80, 40], drive [0, 25] for 2D maps and [0, 40] for the drive sweep,
    nonlinearity [1, 40], and drive 10 for the chi = 2 population map.
    Each range contains all the resonance features of its panel.
    """
    key = preset_id.strip().lower().replace("_", "").replace(" ", "")
    try:
        return PRESETS[key]
    except KeyError:
        raise UnknownPreset(f"unknown preset {preset_id!r}; choose from {sorted(PRESETS)}") from None


# --- export ------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(v, ".17g")


def _csv_records(result: SweepResult):
    for row in result.rows:
        p = row.params
        for engine, res in row.results.items():
            yield [
                _fmt(p.delta / p.gamma), _fmt(p.omega_drive / p.gamma), _fmt(p.chi / p.gamma),
                *(_fmt(v) for v in res.probs), _fmt(res.mean_n), _fmt(res.g2),
                engine.value, "true" if res.converged else "false", _fmt(row.max_discrepancy),
            ]


def _json_float(v: float):
    return v if math.isfinite(v) else None


def _json_document(result: SweepResult) -> dict:
    records = []
    for row in result.rows:
        p = row.params
        for engine, res in row.results.items():
            records.append({
                "index": row.index,
                "delta_over_gamma": p.delta / p.gamma,
                "omega_over_gamma": p.omega_drive / p.gamma,
                "chi_over_gamma": p.chi / p.gamma,
                **{f"p{n}": _json_float(v) for n, v in enumerate(res.probs)},
                "mean_n": _json_float(res.mean_n),
                "g2": _json_float(res.g2),
                "engine": engine.value,
                "converged": res.converged,
                "error": res.error,
                "max_discrepancy": _json_float(row.max_discrepancy),
            })
    peaks = [{"observable": k.observable, "engine": k.engine.value, "curve": k.curve,
              "position": k.position, "height": k.height} for k in result.peaks]
    return {"header": result.header, "spec": result.spec.to_dict(),
            "rows": records, "peaks": peaks}


def dumps(result: SweepResult, fmt: str) -> str:
    """Serialize a sweep to CSV or JSON text (see :func:`export`)."""
    fmt = fmt.lower()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(_csv_records(result))
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(_json_document(result), indent=1, allow_nan=False) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")


def export(result: SweepResult, fmt: str, path) -> None:
    """Write a sweep as CSV or JSON.

    CSV has one line per (row, engine) with the columns in ``CSV_COLUMNS``
    and every float printed with 17 significant digits, so values round-trip
    exactly. JSON carries the same records plus the spec echo and detected
    peaks. Wigner grids attached to the result go to sibling files
    ``<stem>_wigner_<engine>.csv``.
    """
    text = dumps(result, fmt)
    path = Path(path)
    try:
        path.write_text(text)
        for engine, grid in result.wigner.items():
            export_wigner(grid, path.with_name(f"{path.stem}_wigner_{engine.value}.csv"))
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def export_wigner(grid: analytic.WignerGrid, path) -> None:
    """Write a Wigner grid as ``x, y, w`` triples (x outer, y inner)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "w"])
    for i, x in enumerate(grid.x_axis):
        for j, y in enumerate(grid.y_axis):
            writer.writerow([_fmt(x), _fmt(y), _fmt(grid.values[i, j])])
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> list[dict]:
    """Parse a sweep CSV back into dicts with float / bool fields."""
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            row = {}
            for k, v in rec.items():
                if k == "engine":
                    row[k] = v
                elif k == "converged":
                    row[k] = v == "true"
                else:
                    row[k] = float(v)
            out.append(row)
    return out

"""Experiment orchestration: single runs, scheme comparisons, sweeps and CSV output."""
from __future__ import annotations

import csv
import io
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import lifshitz as ls
from .config import LS_PROBLEMS, RunConfig
from .detector import HybridParams
from .diagnostics import (
    convergence_order,
    front_width,
    l1_error,
    relative_drift,
    total_variation,
)
from .errors import ConfigurationError
from .grid import CellField, build_grid_2d, build_uniform_grid, init_cell_averages
from .integrator import SchemeKind, StepControl, advect_1d, advect_2d
from .problems import get_problem, periodic_shift

OUTPUT_DIR_ENV = "HYBRIDFV_OUTPUT_DIR"

METRICS = (
    "l1_error",
    "tv",
    "tv_error",
    "min",
    "max",
    "mass",
    "mass_drift",
    "steps",
    "substeps",
    "max_courant",
    "closure_error",
    "concentration",
    "moment",
    "front_width",
)


@dataclass(frozen=True)
class CsvRecord:
    run: str
    time: float
    metric: str
    value: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigurationError(f"unknown metric {self.metric!r}")


@dataclass
class CaseResult:
    config: RunConfig
    records: list
    snapshots: dict  # time -> CellField (transport) or LS state
    final: object
    files: list = field(default_factory=list)

    def metric(self, name: str, time: Optional[float] = None) -> float:
        rows = [r for r in self.records if r.metric == name and (time is None or r.time == time)]
        if not rows:
            raise KeyError(name)
        return rows[-1].value


def resolve_output_dir(cfg: RunConfig, override=None) -> Optional[Path]:
    chosen = override or cfg.output_dir or os.environ.get(OUTPUT_DIR_ENV)
    return Path(chosen) if chosen else None


# single runs --------------------------------------------------------------


def _transport_case(cfg: RunConfig):
    spec = get_problem(cfg.problem)
    grid = build_uniform_grid(*spec.bounds, cfg.n_cells)
    f0 = spec.initial_field(grid)
    speed = cfg.velocity

    def velocity(t, x):
        return np.full_like(np.asarray(x, dtype=float), speed)

    control = StepControl("fixed-dt", dt=cfg.dt, t_end=cfg.t_end) if cfg.dt else StepControl(cfl=cfg.cfl, t_end=cfg.t_end)
    params = HybridParams(cfg.alpha, grid.length)
    res = advect_1d(f0, velocity, control, cfg.scheme, params, snapshot_times=cfg.snapshot_times)
    tv0 = total_variation(f0)
    mass0 = float(np.sum(f0.values) * grid.dx)
    mass_scale = float(np.sum(np.abs(f0.values)) * grid.dx)
    fields = {t: f0.with_values(v) for t, v in res.snapshots.items()}
    fields[res.t] = res.field
    records = []
    for t, fld in sorted(fields.items()):
        exact = init_cell_averages(periodic_shift(spec.profile, speed * t, grid.x_min, grid.x_max), grid)
        mass = float(np.sum(fld.values) * grid.dx)
        for name, value in (
            ("l1_error", l1_error(fld, exact)),
            ("tv", total_variation(fld)),
            ("tv_error", total_variation(fld) - tv0),
            ("min", float(fld.values.min())),
            ("max", float(fld.values.max())),
            ("mass", mass),
            ("mass_drift", relative_drift(mass0, mass, mass_scale)),
        ):
            records.append(CsvRecord(cfg.label, t, name, value))
    records.append(CsvRecord(cfg.label, res.t, "steps", float(res.steps)))
    records.append(CsvRecord(cfg.label, res.t, "max_courant", res.max_courant))
    return records, fields, res.field


def _rotation_case(cfg: RunConfig):
    spec = get_problem(cfg.problem)
    grid = build_grid_2d(*spec.bounds[:2], cfg.n_cells, *spec.bounds[2:], cfg.n_cells)
    f0 = spec.initial_field(grid)
    control = StepControl("fixed-dt", dt=cfg.dt, t_end=cfg.t_end) if cfg.dt else StepControl(cfl=cfg.cfl, t_end=cfg.t_end)
    res = advect_2d(f0, spec.velocity_2d, control, cfg.scheme, cfg.alpha, snapshot_times=cfg.snapshot_times)
    fields = {t: f0.with_values(v) for t, v in res.snapshots.items()}
    fields[res.t] = res.field
    records = []
    for t, fld in sorted(fields.items()):
        records += [
            CsvRecord(cfg.label, t, "min", float(fld.values.min())),
            CsvRecord(cfg.label, t, "max", float(fld.values.max())),
            CsvRecord(cfg.label, t, "mass", float(fld.values.sum() * grid.x.dx * grid.y.dx)),
        ]
    # the exact solution returns to the initial state after each full turn
    records.append(CsvRecord(cfg.label, res.t, "l1_error", l1_error(res.field, f0)))
    records.append(CsvRecord(cfg.label, res.t, "steps", float(res.steps)))
    records.append(CsvRecord(cfg.label, res.t, "max_courant", res.max_courant))
    return records, fields, res.field


def _ls_case(cfg: RunConfig):
    xi_grid = build_uniform_grid(0.0, cfg.xi_max, cfg.n_xi)
    params = HybridParams(cfg.alpha, xi_grid.length)
    outs = tuple(cfg.snapshot_times)
    records = []
    if cfg.problem == "ls-homogeneous":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ls.DepletedMonomerWarning)
            state = ls.HomogeneousState(xi_grid, ls.homogeneous_initial(cfg.initial, xi_grid), cfg.rho)
            run = ls.run_homogeneous(state, cfg.dt, cfg.t_end, cfg.scheme, outs, params)
        for t, s in sorted(run.snapshots.items()):
            records += [
                CsvRecord(cfg.label, t, "concentration", s.c),
                CsvRecord(cfg.label, t, "moment", s.moment),
                CsvRecord(cfg.label, t, "closure_error", abs(s.c + s.moment - cfg.rho) / cfg.rho),
                CsvRecord(cfg.label, t, "min", float(s.f.min())),
                CsvRecord(cfg.label, t, "max", float(s.f.max())),
            ]
            fw = front_width(s.f)
            if fw is not None:
                records.append(CsvRecord(cfg.label, t, "front_width", float(fw)))
    else:
        x_grid = build_uniform_grid(0.0, cfg.x_max, cfg.n_x)
        state = ls.nonhomogeneous_initial(cfg.initial, x_grid, xi_grid)
        mass0 = ls.total_mass_nonhomogeneous(state)
        run = ls.run_nonhomogeneous(state, cfg.dt, cfg.t_end, cfg.scheme, outs, params)
        for t, s in sorted(run.snapshots.items()):
            records += [
                CsvRecord(cfg.label, t, "mass", run.mass[t]),
                CsvRecord(cfg.label, t, "mass_drift", relative_drift(mass0, run.mass[t])),
                CsvRecord(cfg.label, t, "min", float(s.f.min())),
                CsvRecord(cfg.label, t, "max", float(s.f.max())),
            ]
    records.append(CsvRecord(cfg.label, run.t, "steps", float(run.steps)))
    records.append(CsvRecord(cfg.label, run.t, "substeps", float(run.substeps)))
    return records, dict(run.snapshots), run.snapshots[max(run.snapshots)]


def run_case(cfg: RunConfig, output_dir=None) -> CaseResult:
    """Run one configuration; write CSV files when an output directory is known.

    The directory is taken from ``output_dir``, then ``cfg.output_dir``, then the
    ``HYBRIDFV_OUTPUT_DIR`` environment variable.
    """
    if cfg.problem in LS_PROBLEMS:
        records, snaps, final = _ls_case(cfg)
    elif cfg.problem == "rotation-zalesak":
        records, snaps, final = _rotation_case(cfg)
    else:
        records, snaps, final = _transport_case(cfg)
    result = CaseResult(cfg, records, snaps, final)
    out = resolve_output_dir(cfg, output_dir)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        metrics_path = out / f"{cfg.label}_metrics.csv"
        write_records_csv(records, metrics_path)
        result.files.append(metrics_path)
        for t, snap in sorted(snaps.items()):
            path = out / f"{cfg.label}_t{t:g}.csv"
            write_snapshot_csv(snap, path)
            result.files.append(path)
        if cfg.output_plot:
            snap_files = [p for p in result.files if p != metrics_path]
            style = "heatmap" if cfg.problem in ("rotation-zalesak", "ls-nonhomogeneous") else "lines"
            script = out / f"{cfg.label}_plot.py"
            script.write_text(emit_plot_script(snap_files, style))
            result.files.append(script)
    return result


# CSV ------------------------------------------------------------------------


def records_to_csv(records: Sequence[CsvRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run", "time", "metric", "value"])
    for r in records:
        w.writerow([r.run, repr(float(r.time)), r.metric, repr(float(r.value))])
    return buf.getvalue()


def write_records_csv(records: Sequence[CsvRecord], path) -> None:
    Path(path).write_text(records_to_csv(records))


def read_records_csv(path) -> list:
    with open(path, newline="") as fh:
        return [CsvRecord(r["run"], float(r["time"]), r["metric"], float(r["value"])) for r in csv.DictReader(fh)]


def write_snapshot_csv(snapshot, path) -> None:
    """One row per cell: coordinate(s) then value(s)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if isinstance(snapshot, CellField) and snapshot.values.ndim == 1:
            w.writerow(["x", "value"])
            for x, v in zip(snapshot.grid.centers, snapshot.values):
                w.writerow([repr(float(x)), repr(float(v))])
        elif isinstance(snapshot, CellField):
            w.writerow(["x", "y", "value"])
            X, Y = np.meshgrid(snapshot.grid.x.centers, snapshot.grid.y.centers)
            for x, y, v in zip(X.ravel(), Y.ravel(), snapshot.values.ravel()):
                w.writerow([repr(float(x)), repr(float(y)), repr(float(v))])
        elif isinstance(snapshot, ls.HomogeneousState):
            w.writerow(["xi", "f"])
            for x, v in zip(snapshot.xi_grid.centers, snapshot.f):
                w.writerow([repr(float(x)), repr(float(v))])
        elif isinstance(snapshot, ls.NonhomogeneousState):
            w.writerow(["x", "xi", "f", "c"])
            xs, xis = snapshot.x_grid.centers, snapshot.xi_grid.centers
            for i, x in enumerate(xs):
                for j, xi in enumerate(xis):
                    w.writerow([repr(float(x)), repr(float(xi)), repr(float(snapshot.f[i, j])), repr(float(snapshot.c[i]))])
        else:
            raise ConfigurationError(f"cannot write snapshot of type {type(snapshot).__name__}")


# studies --------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    n: int
    l1: float
    order: float


def convergence_sweep(base: RunConfig, resolutions: Sequence[int], output_dir=None) -> list:
    """L1 errors and observed orders over successively doubled grids."""
    resolutions = [int(n) for n in resolutions]
    if len(resolutions) < 2:
        raise ConfigurationError("a sweep needs at least two resolutions")
    if any(b != 2 * a for a, b in zip(resolutions[:-1], resolutions[1:])):
        raise ConfigurationError("each resolution must double the previous one")
    if base.problem in LS_PROBLEMS:
        raise ConfigurationError("convergence sweeps need a problem with an exact solution")
    rows, prev = [], None
    for n in resolutions:
        cfg = base.replace(n_cells=n, run_id=f"{base.label}_n{n}" if base.run_id else None)
        err = run_case(cfg, output_dir).metric("l1_error", cfg.t_end)
        rows.append(SweepRow(n, err, float("nan") if prev is None else convergence_order(prev, err)))
        prev = err
    out = resolve_output_dir(base, output_dir)
    if out is not None:
        (out / f"{base.label}_sweep.csv").write_text(sweep_to_csv(rows))
    return rows


def sweep_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "l1", "order"])
    for r in rows:
        w.writerow([r.n, repr(r.l1), "" if np.isnan(r.order) else repr(r.order)])
    return buf.getvalue()


def format_sweep_table(rows, title: str = "") -> str:
    lines = [title] if title else []
    lines.append(f"{'n_x':>6}  {'L1 error':>10}  {'order':>6}")
    for r in rows:
        order = "  -   " if np.isnan(r.order) else f"{r.order:6.2f}"
        lines.append(f"{r.n:>6}  {r.l1:10.2e}  {order}")
    return "\n".join(lines)


def compare_schemes(base: RunConfig, schemes: Sequence[str], output_dir=None) -> dict:
    out = {}
    for s in schemes:
        name = SchemeKind.parse(s).value
        out[name] = run_case(base.replace(scheme=name, run_id=None), output_dir)
    return out


def alpha_scan(base: RunConfig, alphas: Sequence[float], output_dir=None) -> dict:
    out = {}
    for a in alphas:
        cfg = base.replace(scheme="hybrid", alpha=float(a), run_id=f"{base.label}_alpha{float(a):g}")
        out[float(a)] = run_case(cfg, output_dir)
    return out


# plotting -------------------------------------------------------------------


def emit_plot_script(snapshot_files: Sequence, style: str = "lines", zoom=None, title: str = "") -> str:
    """Text of a standalone matplotlib script that plots the given snapshot CSVs.

    ``style`` is ``"lines"`` (overlay of 1D curves, optional ``zoom=(lo, hi)``
    side pane) or ``"heatmap"`` (one panel per 2D snapshot).
    """
    files = [str(p) for p in snapshot_files]
    if not files:
        raise ConfigurationError("emit_plot_script needs at least one snapshot")
    if style not in ("lines", "heatmap"):
        raise ConfigurationError(f"unknown plot style {style!r}")
    head = [
        "import csv",
        "import matplotlib",
        'matplotlib.use("Agg")',
        "import matplotlib.pyplot as plt",
        "import numpy as np",
        "",
        f"FILES = {files!r}",
        f"ZOOM = {tuple(zoom) if zoom else None!r}",
        f"TITLE = {title!r}",
        "",
        "def load(path):",
        "    with open(path, newline='') as fh:",
        "        rows = list(csv.reader(fh))",
        "    return rows[0], np.array(rows[1:], dtype=float)",
        "",
    ]
    if style == "lines":
        body = [
            "ncols = 2 if ZOOM else 1",
            "fig, axes = plt.subplots(1, ncols, figsize=(6 * ncols, 4), squeeze=False)",
            "for path in FILES:",
            "    header, data = load(path)",
            "    for ax in axes[0]:",
            "        ax.plot(data[:, 0], data[:, 1], label=path.rsplit('/', 1)[-1])",
            "if ZOOM:",
            "    axes[0][1].set_xlim(*ZOOM)",
            "    axes[0][1].set_title('zoom')",
            "axes[0][0].legend(fontsize='small')",
        ]
    else:
        body = [
            "fig, axes = plt.subplots(1, len(FILES), figsize=(5 * len(FILES), 4), squeeze=False)",
            "for ax, path in zip(axes[0], FILES):",
            "    header, data = load(path)",
            "    xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])",
            "    if header[1] == 'xi':",
            "        C = data[:, 2].reshape(len(xs), len(ys)).T",
            "    else:",
            "        C = data[:, 2].reshape(len(ys), len(xs))",
            "    im = ax.pcolormesh(xs, ys, C, shading='auto')",
            "    fig.colorbar(im, ax=ax)",
            "    ax.set_title(path.rsplit('/', 1)[-1])",
        ]
    tail = [
        "if TITLE:",
        "    fig.suptitle(TITLE)",
        "fig.tight_layout()",
        "fig.savefig(FILES[0].rsplit('.', 1)[0] + '_plot.png', dpi=120)",
        "",
    ]
    return "\n".join(head + body + tail)

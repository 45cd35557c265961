"""Experiment harness: sweep configuration, per-point runs, persistence,
and figure-data emission.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .evolution import CostKind
from .ising import IsingInstance, gibbs_distribution, ground_set
from .metrics import (
    fairness_gap,
    ground_state_probability,
    orbit_probabilities,
    total_variation_distance,
)
from .powell import PowellOptions
from .variational import optimize_qaoa

DEFAULT_DEPTHS = (1, 2, 3, 5, 7, 10, 15, 22, 32, 46, 68, 100)
DEFAULT_TEMPERATURES = (0.5, 1.0, 2.0)
METHODS = ("qaoa", "sbo")

CSV_BASE_COLUMNS = (
    "method", "scheme", "p", "T", "objective", "p_gs",
    "p_orbit1", "p_orbit2", "p_orbit3", "fairness_gap", "tvd",
    "n_eval", "converged", "wall_time_s",
)

ENV_THREADS = "GIBBS_QAOA_THREADS"


@dataclass(frozen=True)
class SweepConfig:
    instance: IsingInstance
    instance_label: str = "toy"
    methods: tuple[str, ...] = METHODS
    schemes: tuple[str, ...] = ("full", "linearized")
    depths: tuple[int, ...] = DEFAULT_DEPTHS
    temperatures: tuple[float, ...] = DEFAULT_TEMPERATURES
    dt: float = 1.0
    optimizer: PowellOptions = field(default_factory=PowellOptions)
    point_budget_s: float | None = 300.0
    restarts: int = 0
    seed: int = 0
    workers: int | None = None

    def __post_init__(self):
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        for s in self.schemes:
            if s not in ("full", "linearized"):
                raise ValueError(f"unknown scheme {s!r}")
        if not all(p >= 1 for p in self.depths):
            raise ValueError("depths must be >= 1")
        if list(self.depths) != sorted(set(self.depths)):
            raise ValueError("depths must be strictly increasing")
        if not all(t > 0 for t in self.temperatures):
            raise ValueError("temperatures must be positive")


@dataclass(frozen=True)
class PointSpec:
    method: str
    scheme: str
    p: int
    temperature: float | None  # None for the classical method


@dataclass(frozen=True)
class SweepRecord:
    method: str
    scheme: str
    p: int
    temperature: float | None
    objective: float
    p_gs: float
    orbit_probs: tuple[float, ...]
    fairness_gap: float
    tvd: float | None                       # to Gibbs at this record's T (sbo)
    tvd_by_temperature: tuple[tuple[float, float], ...]  # classical rows: per configured T
    n_evaluations: int
    converged: bool
    wall_time_s: float


def grid_points(cfg: SweepConfig) -> list[PointSpec]:
    """Deterministic evaluation order: method, scheme, temperature, depth."""
    if not cfg.methods:
        raise ValueError("nothing to run: empty methods set")
    if not cfg.schemes:
        raise ValueError("nothing to run: empty schemes set")
    points = []
    for method in sorted(set(cfg.methods)):
        for scheme in sorted(set(cfg.schemes)):
            if method == "qaoa":
                for p in cfg.depths:
                    points.append(PointSpec("qaoa", scheme, p, None))
            else:
                for t in sorted(set(cfg.temperatures)):
                    for p in cfg.depths:
                        points.append(PointSpec("sbo", scheme, p, t))
    return points


def run_point(cfg: SweepConfig, point: PointSpec) -> SweepRecord:
    """Optimize one grid point and evaluate every metric on its output."""
    t0 = time.perf_counter()
    kind = (CostKind.classical() if point.method == "qaoa"
            else CostKind.sbo(point.temperature))
    opts = replace(cfg.optimizer, time_budget=cfg.point_budget_s)
    outcome = optimize_qaoa(
        cfg.instance, kind, point.scheme, point.p,
        options=opts, dt=cfg.dt, restarts=cfg.restarts, seed=cfg.seed,
    )
    gs = ground_set(cfg.instance)
    dist = outcome.distribution
    orbit_probs = orbit_probabilities(dist, gs) if gs.orbits is not None else ()
    if point.method == "sbo":
        reference = gibbs_distribution(cfg.instance, point.temperature).probabilities
        tvd = total_variation_distance(dist, reference)
        tvd_by_t: tuple[tuple[float, float], ...] = ()
    else:
        tvd = None
        tvd_by_t = tuple(
            (t, total_variation_distance(
                dist, gibbs_distribution(cfg.instance, t).probabilities))
            for t in sorted(set(cfg.temperatures))
        )
    return SweepRecord(
        method=point.method,
        scheme=point.scheme,
        p=point.p,
        temperature=point.temperature,
        objective=outcome.result.best_value,
        p_gs=ground_state_probability(dist, gs),
        orbit_probs=orbit_probs,
        fairness_gap=fairness_gap(orbit_probs) if orbit_probs else 0.0,
        tvd=tvd,
        tvd_by_temperature=tvd_by_t,
        n_evaluations=outcome.total_evaluations,
        converged=outcome.result.converged,
        wall_time_s=time.perf_counter() - t0,
    )


@dataclass
class SweepFailure:
    point: PointSpec
    error: str


def _worker(args) -> SweepRecord:
    cfg, point = args
    return run_point(cfg, point)


def resolve_workers(requested: int | None) -> int:
    env = os.environ.get(ENV_THREADS)
    if env:
        return max(1, int(env))
    if requested is not None:
        return max(1, requested)
    return os.cpu_count() or 1


def run_sweep(cfg: SweepConfig) -> tuple[list[SweepRecord], list[SweepFailure]]:
    """Evaluate every grid point; failures are collected, not fatal.

    Records come back in the deterministic grid order regardless of the
    concurrency degree.
    """
    points = grid_points(cfg)
    workers = resolve_workers(cfg.workers)
    records: dict[PointSpec, SweepRecord] = {}
    failures: list[SweepFailure] = []
    if workers <= 1 or len(points) == 1:
        for point in points:
            try:
                records[point] = run_point(cfg, point)
            except Exception as exc:  # noqa: BLE001 - per-point isolation
                failures.append(SweepFailure(point, f"{type(exc).__name__}: {exc}"))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_worker, (cfg, point)): point for point in points}
            for future, point in futures.items():
                try:
                    records[point] = future.result()
                except Exception as exc:  # noqa: BLE001
                    failures.append(SweepFailure(point, f"{type(exc).__name__}: {exc}"))
    ordered = [records[point] for point in points if point in records]
    return ordered, failures


# --- serialization -----------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.12g}"


def _extra_tvd_columns(records) -> list[float]:
    temps = sorted({t for r in records for (t, _) in r.tvd_by_temperature})
    return temps


def csv_header(records) -> list[str]:
    return list(CSV_BASE_COLUMNS) + [f"tvd_T{t!r}" for t in _extra_tvd_columns(records)]


def record_row(record: SweepRecord, extra_temps) -> list[str]:
    orbit = list(record.orbit_probs[:3]) + [None] * (3 - len(record.orbit_probs[:3]))
    cells = [
        record.method,
        record.scheme,
        str(record.p),
        _fmt(record.temperature),
        _fmt(record.objective),
        _fmt(record.p_gs),
        _fmt(orbit[0]),
        _fmt(orbit[1]),
        _fmt(orbit[2]),
        _fmt(record.fairness_gap),
        _fmt(record.tvd),
        str(record.n_evaluations),
        _fmt(record.converged),
        _fmt(record.wall_time_s),
    ]
    by_t = dict(record.tvd_by_temperature)
    cells += [_fmt(by_t.get(t)) for t in extra_temps]
    return cells


def emit_csv(records: list[SweepRecord], path) -> None:
    extra = _extra_tvd_columns(records)
    lines = [",".join(csv_header(records))]
    for r in records:
        lines.append(",".join(record_row(r, extra)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def record_to_dict(record: SweepRecord) -> dict:
    d = {
        "method": record.method,
        "scheme": record.scheme,
        "p": record.p,
        "T": record.temperature,
        "objective": record.objective,
        "p_gs": record.p_gs,
    }
    for i, v in enumerate(record.orbit_probs, start=1):
        d[f"p_orbit{i}"] = v
    d.update({
        "fairness_gap": record.fairness_gap,
        "tvd": record.tvd,
        "n_eval": record.n_evaluations,
        "converged": record.converged,
        "wall_time_s": record.wall_time_s,
    })
    for (t, v) in record.tvd_by_temperature:
        d[f"tvd_T{t!r}"] = v
    return d


def record_from_dict(d: dict) -> SweepRecord:
    orbit = []
    i = 1
    while f"p_orbit{i}" in d:
        orbit.append(float(d[f"p_orbit{i}"]))
        i += 1
    tvd_by_t = tuple(
        (float(k[len("tvd_T"):]), float(v))
        for k, v in d.items() if k.startswith("tvd_T")
    )
    return SweepRecord(
        method=d["method"],
        scheme=d["scheme"],
        p=int(d["p"]),
        temperature=None if d["T"] is None else float(d["T"]),
        objective=float(d["objective"]),
        p_gs=float(d["p_gs"]),
        orbit_probs=tuple(orbit),
        fairness_gap=float(d["fairness_gap"]),
        tvd=None if d["tvd"] is None else float(d["tvd"]),
        tvd_by_temperature=tvd_by_t,
        n_evaluations=int(d["n_eval"]),
        converged=bool(d["converged"]),
        wall_time_s=float(d["wall_time_s"]),
    )


def emit_json(records: list[SweepRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([record_to_dict(r) for r in records], fh, indent=1)
        fh.write("\n")


def load_json(path) -> list[SweepRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        return [record_from_dict(d) for d in json.load(fh)]


# --- figure data -------------------------------------------------------------

FIG2_PANELS = (
    ("a", "qaoa", "full"),
    ("b", "qaoa", "linearized"),
    ("c", "sbo", "full"),
    ("d", "sbo", "linearized"),
)
FIG2_SBO_TEMPERATURE = 1.0
FIG3_PANELS = (("a", "full"), ("b", "linearized"))


class MissingPanelData(ValueError):
    pass


def _fig2_rows(records, method, scheme):
    rows = []
    for r in records:
        if r.method != method or r.scheme != scheme:
            continue
        if method == "sbo" and r.temperature != FIG2_SBO_TEMPERATURE:
            continue
        if len(r.orbit_probs) != 3:
            raise MissingPanelData("ground-probability panels need exactly 3 orbits")
        rows.append((r.p, *r.orbit_probs, r.p_gs))
    rows.sort()
    return rows


def _fig3_rows(records, scheme, temps):
    by_p: dict[int, dict[float, float]] = {}
    for r in records:
        if r.method != "sbo" or r.scheme != scheme or r.tvd is None:
            continue
        by_p.setdefault(r.p, {})[r.temperature] = r.tvd
    rows = []
    for p in sorted(by_p):
        vals = by_p[p]
        if set(temps) - set(vals):
            raise MissingPanelData(
                f"depth {p}: missing temperatures {sorted(set(temps) - set(vals))}"
            )
        rows.append((p, *[vals[t] for t in temps]))
    return rows


def emit_fig_data(records: list[SweepRecord], figure: str, out_dir, svg: bool = False) -> list[str]:
    """Write one whitespace-separated data file per panel; returns the paths.

    figure "fig2": ground-manifold probabilities vs depth, panels (a)-(d).
    figure "fig3": distance to the target Gibbs distribution vs depth for
    each temperature, panels (a)-(b). With svg=True a simple poly-line plot
    accompanies each data file.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if figure == "fig2":
        for panel, method, scheme in FIG2_PANELS:
            rows = _fig2_rows(records, method, scheme)
            if not rows:
                raise MissingPanelData(f"fig2({panel}): no records for {method}/{scheme}")
            header = "# p P_1 P_2 P_3 P_GS"
            path = os.path.join(out_dir, f"fig2{panel}.dat")
            _write_table(path, header, rows)
            paths.append(path)
            if svg:
                paths.append(_write_svg(
                    os.path.join(out_dir, f"fig2{panel}.svg"), rows,
                    ["P_1", "P_2", "P_3", "P_GS"],
                    title=f"fig2({panel}) {method} {scheme}",
                ))
    elif figure == "fig3":
        temps = sorted({r.temperature for r in records
                        if r.method == "sbo" and r.tvd is not None})
        if not temps:
            raise MissingPanelData("fig3: no sbo records with a reference distance")
        for panel, scheme in FIG3_PANELS:
            rows = _fig3_rows(records, scheme, temps)
            if not rows:
                raise MissingPanelData(f"fig3({panel}): no records for sbo/{scheme}")
            header = "# p " + " ".join(f"D_TVD_T{t!r}" for t in temps)
            path = os.path.join(out_dir, f"fig3{panel}.dat")
            _write_table(path, header, rows)
            paths.append(path)
            if svg:
                paths.append(_write_svg(
                    os.path.join(out_dir, f"fig3{panel}.svg"), rows,
                    [f"T={t!r}" for t in temps],
                    title=f"fig3({panel}) sbo {scheme}",
                ))
    else:
        raise ValueError(f"unknown figure {figure!r} (expected fig2 or fig3)")
    return paths


def _write_table(path, header, rows) -> None:
    lines = [header]
    for row in rows:
        cells = [str(row[0])] + [f"{v:.12g}" for v in row[1:]]
        lines.append(" ".join(cells))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_svg(path, rows, labels, title="") -> str:
    from .svgplot import line_plot

    xs = [row[0] for row in rows]
    series = [[row[1 + i] for row in rows] for i in range(len(labels))]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(line_plot(xs, series, labels, title=title))
    return path

"""Experiment execution: engine dispatch, run directories, parallel sweeps.

Each run writes ``series.csv`` (schema fixed per engine, see ENGINE_COLUMNS),
a ``metadata.json`` sidecar (config echo, code version, wall time, warnings),
and optionally an SVG plot with its ``.dat`` companion.  Identical
(config, seed) pairs produce byte-identical CSVs regardless of the sweep
worker count: cases are keyed and written in sorted order.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..fields import (
    GridField,
    InitialData,
    Mollifier,
    WeightProfile,
    make_initial_grid,
    make_initial_lattice,
)
from ..lattice import LatticeModel, run_lattice
from ..lattice_linear import (
    adversarial_data,
    kernel_table,
    linear_evolve,
    pairing_check,
    random_ensemble_second_moment,
)
from ..continuum import (
    ContinuumModel,
    LocalEnergyProbe,
    global_energy,
    global_mass,
    local_energy_probe,
    run_continuum,
)
from ..newton import RadiusSchedule, newton_iterate
from ..wave import WaveState, run_nlw
from .config import ConfigError, ExperimentConfig
from .csvio import write_csv
from .svgplot import write_line_plot

__all__ = ["ENGINE_COLUMNS", "EngineResult", "execute", "run_experiment", "sweep_experiment"]

ENGINE_COLUMNS = {
    "lattice": ["t", "sup_abs", "global_mass", "global_energy", "local_mass", "local_energy", "sup_dt"],
    "lattice-linear": ["t0", "adversarial_ratio", "pairing_ok", "ensemble_m2"],
    # continuum appends one local_energy_<i> column per probe
    "continuum": ["t", "sup_abs", "mass", "energy"],
    "nlw": ["t", "sup_abs", "energy"],
    "newton": ["n", "eps_n", "sup_residual", "ratio"],
}

# seed offset for the independent velocity stream of wave data
_NLW_VELOCITY_SEED_OFFSET = 1000003


@dataclass
class EngineResult:
    columns: list[str]
    rows: list[tuple]
    warnings: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _initial_data(params: dict) -> InitialData:
    kind = params["data.kind"]
    amp = params["data.amplitude"]
    seed = params["data.seed"]
    if kind == "constant":
        return InitialData.constant(amp)
    if kind == "delta":
        return InitialData.delta(amp)
    if kind == "random_phase":
        return InitialData.random_phase(amp, seed)
    if kind == "random_gaussian":
        return InitialData.random_gaussian(amp, seed)
    if kind == "gaussian_comb":
        return InitialData.random_comb(amp, params["data.comb_half_extent"], seed)
    if kind == "periodic":
        return InitialData.periodic(params["data.amplitudes"], params["data.frequencies"])
    if kind == "random_band":
        return InitialData.random_band(amp, params["data.k_band"], seed)
    raise ConfigError(f"invalid value for field 'data.kind': {kind!r}")


def _support_radius(spec: InitialData) -> float | None:
    """Spatial support radius for localized kinds; None for spread data."""
    if spec.kind == "delta":
        return 0.0
    if spec.kind == "gaussian_comb":
        j = spec.comb_origin + np.arange(len(spec.coeffs))
        live = j[np.abs(spec.coeffs) > 0]
        reach = float(np.sqrt(-np.log(1e-18)))
        return float(np.max(np.abs(live))) + reach if len(live) else 0.0
    return None


def _run_lattice_engine(params: dict) -> EngineResult:
    model = LatticeModel(
        sign=params["lattice.sign"],
        p=params["lattice.p"],
        extent=params["lattice.extent"],
        dt=params["lattice.dt"],
        coupling=params["lattice.coupling"],
    )
    t_final = params["run.t_final"]
    spec = _initial_data(params)
    psi0 = make_initial_lattice(spec, model.extent)
    w_t0 = params["weight.t0"] if params["weight.t0"] is not None else t_final
    weight = WeightProfile(x0=params["weight.x0"], R=params["weight.R"], t0=w_t0)
    warnings = []
    support = _support_radius(spec)
    if support is not None:
        needed = support + 2.0 * t_final + 64.0
        if model.extent < needed:
            warnings.append(
                f"wrap-margin check: extent {model.extent} < support + 2T + 64 = {needed:.0f}; "
                "wrap-around may contaminate the light cone"
            )
    records, final = run_lattice(model, psi0, t_final, params["run.record_dt"], weight)
    rows = [
        (r.t, r.sup_abs, r.global_mass, r.global_energy, r.local_mass, r.local_energy, r.sup_dt)
        for r in records
    ]
    return EngineResult(
        columns=list(ENGINE_COLUMNS["lattice"]),
        rows=rows,
        warnings=warnings,
        summary={"final_sup_abs": final.sup_abs(), "final_mass": final.mass()},
    )


def _run_lattice_linear_engine(params: dict) -> EngineResult:
    rows = []
    for t0 in params["run.t0_values"]:
        if t0 < 20.0:
            raise ConfigError("run.t0_values entries must be >= 20 (stationary-phase regime)")
        kern = kernel_table(t0)
        extent = max(params["run.extent"], kern.half_width)
        data = adversarial_data(t0, extent, kern)
        evolved = linear_evolve(data, t0, kernel_table(t0, extent))
        ratio = abs(evolved.at(0)) / np.sqrt(t0)
        ok = pairing_check(t0)
        m2 = random_ensemble_second_moment(
            t0,
            params["ensemble.amplitude"],
            params["ensemble.samples"],
            params["ensemble.seed"],
            kern,
        )
        rows.append((float(t0), float(ratio), bool(ok), float(m2)))
    return EngineResult(columns=list(ENGINE_COLUMNS["lattice-linear"]), rows=rows)


def _mollifier(params: dict) -> Mollifier:
    kind = params["mollifier.kind"]
    if kind == "gaussian":
        return Mollifier.gaussian(params["mollifier.sigma"])
    if kind == "fourier_cutoff":
        return Mollifier.fourier_cutoff(params["mollifier.cutoff"])
    raise ConfigError(f"invalid value for field 'mollifier.kind': {kind!r}")


def _run_continuum_engine(params: dict) -> EngineResult:
    phi = _mollifier(params)
    model = ContinuumModel(
        mollifier=phi,
        box_length=params["continuum.box_length"],
        grid_size=params["continuum.grid_size"],
        dt=params["continuum.dt"],
        sign=params["continuum.sign"],
        coupling=params["continuum.coupling"],
        dealias=params["continuum.dealias"],
    )
    spec = _initial_data(params)
    u0 = make_initial_grid(spec, model.box_length, model.grid_size)
    probes = [LocalEnergyProbe(x0=x0, R=params["probe.R"]) for x0 in params["probe.x0_values"]]
    for probe in probes:
        probe.check_inside(model.box_length)
    traj = run_continuum(u0, model, params["run.t_final"], params["run.record_dt"])
    columns = list(ENGINE_COLUMNS["continuum"]) + [
        f"local_energy_{i}" for i in range(len(probes))
    ]
    rows = []
    for i, t in enumerate(traj.times):
        fld = traj.field(i)
        row = [float(t), fld.sup_abs(), global_mass(fld), global_energy(fld, phi)]
        row.extend(local_energy_probe(fld, probe, phi) for probe in probes)
        rows.append(tuple(row))
    return EngineResult(columns=columns, rows=rows)


def _run_nlw_engine(params: dict) -> EngineResult:
    box = params["nlw.box_length"]
    size = params["nlw.grid_size"]
    spec_u = _initial_data(params)
    u0 = make_initial_grid(spec_u, box, size)
    if spec_u.kind == "random_band":
        spec_v = InitialData.random_band(
            spec_u.amplitude, spec_u.k_band, params["data.seed"] + _NLW_VELOCITY_SEED_OFFSET
        )
        v0 = make_initial_grid(spec_v, box, size)
    else:
        v0 = GridField(values=np.zeros(size, dtype=complex), box_length=box)
    state = WaveState(
        u=GridField(values=u0.values.real.astype(complex), box_length=box),
        v=GridField(values=v0.values.real.astype(complex), box_length=box),
    )
    records, _final = run_nlw(
        state, params["run.t_final"], params["nlw.dt"], params["run.record_dt"], params["nlw.p"]
    )
    return EngineResult(
        columns=list(ENGINE_COLUMNS["nlw"]),
        rows=[tuple(r) for r in records],
    )


def _run_newton_engine(params: dict) -> EngineResult:
    spec = _initial_data(params)
    psi0 = make_initial_grid(spec, params["newton.box_length"], params["newton.grid_size"])
    result = newton_iterate(
        psi0,
        params["newton.t_final"],
        params["newton.dt"],
        schedule=RadiusSchedule(r1=params["newton.r1"]),
        max_iter=params["newton.max_iter"],
        tol=params["newton.tol"],
    )
    rows = [(r.n, r.eps, r.sup_residual, r.ratio) for r in result.rows]
    return EngineResult(
        columns=list(ENGINE_COLUMNS["newton"]),
        rows=rows,
        summary={
            "converged": result.converged,
            "iterations": result.iterations,
            "amplitude_scale": result.amplitude_scale,
        },
    )


_ENGINE_RUNNERS = {
    "lattice": _run_lattice_engine,
    "lattice-linear": _run_lattice_linear_engine,
    "continuum": _run_continuum_engine,
    "nlw": _run_nlw_engine,
    "newton": _run_newton_engine,
}


def execute(config: ExperimentConfig) -> EngineResult:
    """Run an engine in memory (no files)."""
    return _ENGINE_RUNNERS[config.engine](config.params)


def _write_outputs(config: ExperimentConfig, result: EngineResult, out_dir: Path, wall: float) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(out_dir / "series.csv", result.columns, result.rows)
    meta = {
        "config": config.echo(),
        "code_version": __version__,
        "wall_time_s": wall,
        "warnings": result.warnings,
        "summary": {k: (float(v) if isinstance(v, (int, float, np.floating)) else v)
                    for k, v in result.summary.items()},
    }
    (out_dir / "metadata.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if config.params.get("output.svg"):
        data = np.array([[float(v) for v in row] for row in result.rows])
        if len(data):
            x = data[:, 0]
            ys = {result.columns[1]: data[:, 1]}
            loglog = config.engine in ("lattice", "continuum", "nlw") and np.all(x[1:] > 0)
            write_line_plot(
                out_dir / "plot.svg",
                x[1:] if loglog else x,
                {k: v[1:] if loglog else v for k, v in ys.items()},
                title=config.engine,
                xlabel=result.columns[0],
                ylabel=result.columns[1],
                loglog=bool(loglog),
            )


def run_experiment(config: ExperimentConfig, out_dir: str | Path) -> Path:
    """Execute one run and write its directory; returns the directory path."""
    out = Path(out_dir)
    start = time.perf_counter()
    result = execute(config)
    _write_outputs(config, result, out, time.perf_counter() - start)
    return out


# sweep key -> (target config key per engine)
_SWEEP_TARGETS = {
    "sweep.seeds": {"lattice": "data.seed", "continuum": "data.seed", "nlw": "data.seed",
                    "lattice-linear": "ensemble.seed"},
    "sweep.R": {"lattice": "weight.R", "continuum": "probe.R"},
    "sweep.x0": {"lattice": "weight.x0"},
}


def _case_key(assignment: dict) -> str:
    return "_".join(f"{k.split('.')[-1]}={v}" for k, v in sorted(assignment.items()))


def sweep_experiment(config: ExperimentConfig, out_dir: str | Path, workers: int = 1) -> Path:
    """Expand sweep lists into a deterministic case grid and run them all.

    Cases execute concurrently over immutable configs; the summary is keyed
    and sorted before writing, so the output is independent of worker count.
    """
    axes = []
    for sweep_key, targets in _SWEEP_TARGETS.items():
        values = config.params.get(sweep_key) or ()
        if values:
            if config.engine not in targets:
                raise ConfigError(f"{sweep_key} is not applicable to engine {config.engine!r}")
            axes.append((targets[config.engine], list(values)))
    if not axes:
        raise ConfigError("sweep requested but no sweep.* lists are set")
    cases: list[dict] = [{}]
    for key, values in axes:
        cases = [dict(c, **{key: v}) for c in cases for v in values]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def one(assignment: dict):
        cfg = config.with_overrides(**assignment)
        key = _case_key(assignment)
        run_experiment(cfg, out / key)
        return key, assignment

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        done = list(pool.map(one, cases))
    done.sort(key=lambda kv: kv[0])
    axis_names = sorted({k for _, a in done for k in a})
    rows = [tuple([key] + [a[name] for name in axis_names]) for key, a in done]
    write_csv(out / "sweep_index.csv", ["case"] + axis_names, rows)
    meta = {
        "config": config.echo(),
        "code_version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "cases": [key for key, _ in done],
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out

# homscope/runner.py
"""
Scenario execution and artifact writing.

run_scenario computes everything in memory and returns a RunResult; the
writers only touch the output directory once the whole run has succeeded.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import config
from homscope import __version__, chronowigner, classical, gkpcomb, hom, pumpeng
from homscope.biphoton import PMConvention, schmidt_number
from homscope.errors import ConfigError, DegenerateStateError
from homscope.scenario import (
    Scenario,
    ScenarioKind,
    build_amplitude,
    build_beams,
    build_cavity,
    build_comb,
    build_device,
    build_frequency_grid,
    build_phase,
    build_pump_fminus,
    build_state,
    build_time_grid,
)

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Table:
    """One CSV artifact: a curve (header + rows) or a (tau, mu) matrix"""

    header: list
    rows: list = field(repr=False)
    matrix: bool = False


@dataclass(frozen=True)
class RunResult:
    name: str
    kind: ScenarioKind
    table: Table
    sidecar: dict


def _format(value) -> str:
    return format(float(value), ".17g")


def _number(value):
    value = float(value)
    return value if np.isfinite(value) else None


def _curve(header, *columns) -> Table:
    return Table(list(header), [list(row) for row in zip(*columns)])


def _matrix(mu_points, tau_points, values) -> Table:
    header = list(mu_points)
    rows = [[tau] + list(values[t]) for t, tau in enumerate(tau_points)]
    return Table(header, rows, matrix=True)


def _visibility(curve):
    try:
        return _number(classical.visibility(curve))
    except DegenerateStateError:
        return None


def _run_hom_scan(scenario: Scenario, body: dict, options: dict, threads: int):
    jsa, _ = build_state(body["state"])
    taus = build_time_grid(body["sweep"]["tau"])
    curve = hom.hom_scan(jsa, taus, float(options.get("mu", 0.0)), int(options.get("arm", 2)))
    tolerance = config.numeric("witness_tolerance")
    derived = {
        "min": _number(np.min(curve)),
        "max": _number(np.max(curve)),
        "visibility": _visibility(curve),
        "schmidt_number": _number(schmidt_number(jsa)),
        "witness_fired": bool(np.any(curve > 0.5 + tolerance)),
    }
    return _curve(["tau", "coincidence"], taus.points, curve), derived


def _run_coincidence_map(scenario: Scenario, body: dict, options: dict, threads: int):
    jsa, convention = build_state(body["state"])
    if body["state"]["type"] == "separable":
        convention = PMConvention.parse(options.get("convention", "halved"))
    mu_grid = build_frequency_grid(body["sweep"]["mu"])
    tau_grid = build_time_grid(body["sweep"]["tau"])
    cmap = hom.coincidence_map(jsa, mu_grid, tau_grid, convention, threads)
    wmap = chronowigner.wigner_from_hom(cmap)
    verdict = chronowigner.witness(cmap)
    derived = {
        "convention": convention.value,
        "min": _number(np.min(cmap.values)),
        "max": _number(np.max(cmap.values)),
        "wigner_min": _number(np.min(wmap.values)),
        "negativity_volume": _number(chronowigner.negativity_volume(wmap)),
        "witness_fired": verdict.fired,
        "witness_points": len(verdict.points),
        "schmidt_number": _number(schmidt_number(jsa)),
    }
    return _matrix(mu_grid.points, tau_grid.points, cmap.values), derived


def _run_wigner_map(scenario: Scenario, body: dict, options: dict, threads: int):
    g = build_amplitude(body["amplitude"])
    mu_grid = build_frequency_grid(body["sweep"]["mu"])
    tau_grid = build_time_grid(body["sweep"]["tau"])
    wmap = chronowigner.wigner_map(g, mu_grid, tau_grid, options.get("method", "fft"))
    spectral, _ = chronowigner.marginals(wmap)
    derived = {
        "min": _number(np.min(wmap.values)),
        "max": _number(np.max(wmap.values)),
        "negativity_volume": _number(chronowigner.negativity_volume(wmap)),
        "witness_fired": chronowigner.witness(wmap).fired,
        "marginal_norm": _number(np.sum(spectral) * mu_grid.step),
    }
    return _matrix(mu_grid.points, tau_grid.points, wmap.values), derived


def _run_classical_dip(scenario: Scenario, body: dict, options: dict, threads: int):
    alpha = build_amplitude(body["alpha"])
    beta = build_amplitude(body["beta"]) if "beta" in body else None
    source = classical.CoherentInput(alpha, build_phase(body["phase"]), beta)
    times = build_time_grid(body["sweep"]["t"])
    curve = classical.correlation_scan(source, times.points, bool(options.get("second_order_only", False)))
    derived = {
        "min": _number(np.min(curve)),
        "max": _number(np.max(curve)),
        "visibility": _visibility(curve),
    }
    return _curve(["t", "correlation"], times.points, curve), derived


def _run_pump_state(scenario: Scenario, body: dict, options: dict, threads: int):
    device = build_device(body["device"])
    beams = build_beams(body["beams"])
    grid = build_frequency_grid(body["grid"])
    fminus = build_pump_fminus(device, beams, grid, options.get("method", "fft"))
    if "cavity" in body:
        fminus = pumpeng.cavity_comb(fminus, build_cavity(body["cavity"]))
    intensity = np.abs(fminus.values) ** 2
    derived = {
        "beams": [
            dict(zip(("tau0", "omega0", "delta_omega"), map(_number, pumpeng.gaussian_parameters(beam, device))))
            for beam in beams
        ],
        "peak_omega": _number(grid.points[int(np.argmax(intensity))]),
        "orthogonality_defect": _number(pumpeng.orthogonality_defect(beams, device, grid)),
    }
    table = _curve(
        ["omega_minus", "real", "imag", "intensity"],
        grid.points, fminus.values.real, fminus.values.imag, intensity,
    )
    return table, derived


def _run_comb_readout(scenario: Scenario, body: dict, options: dict, threads: int):
    spec = body["comb"]
    state = build_comb(spec)
    for name in body.get("gates", []):
        gate = gkpcomb.logical_x(state.spacing) if name == "X" else gkpcomb.logical_z(state.spacing)
        state = gkpcomb.apply_gate(state, gate)
    taus = build_time_grid(body["sweep"]["tau"])
    pairing = options.get("pairing", "separable")
    if pairing == "pair":
        if "plus" not in body:
            raise ConfigError("pair readout needs a 'plus' amplitude")
        curve = gkpcomb.pair_readout(state, taus, build_amplitude(body["plus"]))
    else:
        curve = gkpcomb.hom_readout(state, state, taus)

    overlaps = {}
    for label in ("0", "1", "+", "-"):
        reference = build_comb({**spec, "label": label})
        overlaps[label] = _number(abs(gkpcomb.logical_overlap(reference, state)))
    derived = {
        "label": state.label.value,
        "logical_overlaps": overlaps,
        "min": _number(np.min(curve)),
        "max": _number(np.max(curve)),
    }
    return _curve(["tau", "coincidence"], taus.points, curve), derived


def _run_spectrogram(scenario: Scenario, body: dict, options: dict, threads: int):
    f = build_amplitude(body["signal"])
    window = build_amplitude(body["window"])
    mu_grid = build_frequency_grid(body["sweep"]["mu"])
    tau_grid = build_time_grid(body["sweep"]["tau"])
    values = hom.spectrogram_map(f, window, mu_grid, tau_grid, threads)
    derived = {"min": _number(np.min(values)), "max": _number(np.max(values))}
    return _matrix(mu_grid.points, tau_grid.points, values), derived


RUNNERS = {
    ScenarioKind.HOM_SCAN: _run_hom_scan,
    ScenarioKind.COINCIDENCE_MAP: _run_coincidence_map,
    ScenarioKind.WIGNER_MAP: _run_wigner_map,
    ScenarioKind.CLASSICAL_DIP: _run_classical_dip,
    ScenarioKind.PUMP_STATE: _run_pump_state,
    ScenarioKind.COMB_READOUT: _run_comb_readout,
    ScenarioKind.SPECTROGRAM: _run_spectrogram,
}


def run_scenario(scenario: Scenario, threads: int = 1) -> RunResult:
    """Compute a scenario; nothing is written"""
    LOGGER.info("running scenario %s (%s) on %d thread(s)", scenario.name, scenario.kind.value, threads)
    with config.numeric_overrides(scenario.options):
        table, derived = RUNNERS[scenario.kind](scenario, scenario.body, scenario.options, threads)
    sidecar = {
        "homscope_version": __version__,
        "name": scenario.name,
        "kind": scenario.kind.value,
        "scenario": scenario.resolved(),
        "derived": derived,
        "outputs": [f"{scenario.name}.csv", f"{scenario.name}.json"],
    }
    return RunResult(scenario.name, scenario.kind, table, sidecar)


def render_csv(table: Table) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if table.matrix:
        writer.writerow(["tau\\mu"] + [_format(v) for v in table.header])
    else:
        writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_format(v) for v in row])
    return buffer.getvalue()


def render_sidecar(result: RunResult) -> str:
    return json.dumps(result.sidecar, indent=2, sort_keys=True) + "\n"


def render_gnuplot(result: RunResult) -> str:
    data = f"{result.name}.csv"
    lines = ['set datafile separator ","', f'set title "{result.name} ({result.kind.value})"']
    if result.table.matrix:
        lines += [
            'set xlabel "mu"',
            'set ylabel "tau"',
            "set view map",
            f'plot "{data}" nonuniform matrix using 1:2:3 with image notitle',
        ]
    else:
        header = result.table.header
        lines += [
            "set key autotitle columnhead",
            f'set xlabel "{header[0]}"',
            f'plot "{data}" using 1:2 with lines',
        ]
    return "\n".join(lines) + "\n"


def _atomic_write_all(files: dict[Path, str]):
    staged = []
    try:
        for path, text in files.items():
            handle = tempfile.NamedTemporaryFile(
                "w", encoding="utf-8", dir=path.parent, prefix=f".{path.name}.", delete=False, newline=""
            )
            with handle:
                handle.write(text)
            staged.append((Path(handle.name), path))
        for temporary, path in staged:
            os.replace(temporary, path)
    finally:
        for temporary, _ in staged:
            if temporary.exists():
                temporary.unlink()


def write_result(result: RunResult, out_dir, gnuplot: bool = False) -> list[Path]:
    """Persist CSV, JSON sidecar and optionally a gnuplot script"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        out_dir / f"{result.name}.csv": render_csv(result.table),
        out_dir / f"{result.name}.json": render_sidecar(result),
    }
    if gnuplot:
        files[out_dir / f"{result.name}.gp"] = render_gnuplot(result)
    _atomic_write_all(files)
    LOGGER.info("wrote %d file(s) for %s to %s", len(files), result.name, out_dir)
    return sorted(files)

# homscope/scenario.py
"""
Scenario files: a JSON object describing one experiment.

    {
      "name": "gaussian_dip",
      "kind": "hom_scan",
      "state": {"type": "separable", "first": {...amplitude...}},
      "sweep": {"tau": {"n": 256, "center": 0.0, "span": 12.0}},
      "options": {}
    }

Amplitudes are {"shape": gaussian | hermite1 | pump | comb, "grid": {...}, ...}
with an optional "cavity" filter. States are "separable" (first, second,
phase) or "pm" (plus, minus, convention). Validation collects every problem
as a Diagnostic before anything is computed.
"""
from __future__ import annotations

import copy
import enum
import json
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

import config
from homscope import biphoton, gkpcomb, pumpeng
from homscope.biphoton import PMConvention, SpectralAmplitude
from homscope.classical import PhaseDistribution, PhaseKind
from homscope.gkpcomb import LogicalLabel
from homscope.errors import ConfigError, Diagnostic, ScenarioError
from homscope.sfgrid import FrequencyGrid, TimeGrid

LOGGER = logging.getLogger(__name__)

NUMBER = (int, float)


class ScenarioKind(enum.Enum):
    HOM_SCAN = "hom_scan"
    COINCIDENCE_MAP = "coincidence_map"
    WIGNER_MAP = "wigner_map"
    CLASSICAL_DIP = "classical_dip"
    PUMP_STATE = "pump_state"
    COMB_READOUT = "comb_readout"
    SPECTROGRAM = "spectrogram"


# top-level sections each kind requires / accepts, and the sweep axes it needs
KIND_SECTIONS = {
    ScenarioKind.HOM_SCAN: ({"state"}, set(), {"tau"}),
    ScenarioKind.COINCIDENCE_MAP: ({"state"}, set(), {"mu", "tau"}),
    ScenarioKind.WIGNER_MAP: ({"amplitude"}, set(), {"mu", "tau"}),
    ScenarioKind.CLASSICAL_DIP: ({"alpha", "phase"}, {"beta"}, {"t"}),
    ScenarioKind.PUMP_STATE: ({"device", "beams", "grid"}, {"cavity"}, set()),
    ScenarioKind.COMB_READOUT: ({"comb"}, {"gates", "plus"}, {"tau"}),
    ScenarioKind.SPECTROGRAM: ({"signal", "window"}, set(), {"mu", "tau"}),
}
COMMON_SECTIONS = {"name", "kind", "description", "sweep", "options"}

GRID_FIELDS = {"n": int, "center": NUMBER, "span": NUMBER}
AMPLITUDE_FIELDS = {
    "gaussian": {"center": NUMBER, "width": NUMBER, "delay": NUMBER},
    "hermite1": {"center": NUMBER, "width": NUMBER, "delay": NUMBER},
    "pump": {"device": dict, "beams": list, "method": str},
    "comb": {"label": str, "spacing": NUMBER, "tooth_width": NUMBER,
             "envelope_width": (int, float, type(None)), "ideal": bool, "center": NUMBER},
}
AMPLITUDE_REQUIRED = {
    "gaussian": {"width"},
    "hermite1": {"width"},
    "pump": {"device", "beams"},
    "comb": {"label", "spacing"},
}
DEVICE_FIELDS = {"length": NUMBER, "group_velocity": NUMBER, "omega_p": NUMBER,
                 "theta_deg": NUMBER, "c": NUMBER, "k_deg": NUMBER}
DEVICE_REQUIRED = {"length", "group_velocity", "omega_p", "theta_deg"}
BEAM_FIELDS = {"waist": NUMBER, "theta": NUMBER, "z0": NUMBER, "amplitude": NUMBER, "phase": NUMBER}
CAVITY_FIELDS = {"reflectivity": NUMBER, "roundtrip_time": NUMBER, "detuning": str}
PHASE_FIELDS = {"kind": str, "values": list}
PHASE_COUNTS = {"uniform": 0, "two_point": 2, "fixed": 1}
STATE_FIELDS = {
    "separable": {"first": dict, "second": dict, "phase": NUMBER},
    "pm": {"plus": dict, "minus": dict, "convention": str, "grid": dict},
}

PUMP_METHODS = ("fft", "quadrature", "closed_form")
# options each kind reads; the numeric settings are accepted everywhere
OPTION_FIELDS = {
    ScenarioKind.HOM_SCAN: {"convention": str, "mu": NUMBER, "arm": int},
    ScenarioKind.COINCIDENCE_MAP: {"convention": str},
    ScenarioKind.WIGNER_MAP: {"method": str},
    ScenarioKind.CLASSICAL_DIP: {"second_order_only": bool},
    ScenarioKind.PUMP_STATE: {"method": str},
    ScenarioKind.COMB_READOUT: {"pairing": str},
    ScenarioKind.SPECTROGRAM: {},
}
OPTION_CHOICES = {
    (ScenarioKind.HOM_SCAN, "arm"): (1, 2),
    (ScenarioKind.WIGNER_MAP, "method"): ("fft", "quadrature"),
    (ScenarioKind.PUMP_STATE, "method"): PUMP_METHODS,
    (ScenarioKind.COMB_READOUT, "pairing"): ("separable", "pair"),
}


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: ScenarioKind
    body: dict = field(repr=False)
    options: dict = field(repr=False)
    warnings: tuple = ()

    def resolved(self) -> dict:
        """Scenario as run: body with the effective options filled in"""
        data = copy.deepcopy(self.body)
        data["options"] = dict(self.options)
        return data


def _accepts_bool(expected) -> bool:
    return expected is bool or (isinstance(expected, tuple) and bool in expected)


def _matches(value, expected) -> bool:
    if isinstance(value, bool) and not _accepts_bool(expected):
        return False
    return isinstance(value, expected)


class _Checker:
    """Collects diagnostics while walking a parsed scenario"""

    def __init__(self, text: str):
        self.text = text
        self.diagnostics: list[Diagnostic] = []

    def line_of(self, path: str) -> int | None:
        """
        Line of a dotted field path such as "sweep.tau.span" or
        "beams[1].waist", found by searching each key after its parent.
        Stops at the deepest key that is present.
        """
        position, line, repeat = 0, None, 1
        for segment in path.split("."):
            key, _, index = segment.partition("[")
            pattern = re.compile(r'"%s"\s*:' % re.escape(key))
            for _ in range(repeat):
                match = pattern.search(self.text, position)
                if match is None:
                    return line
                position = match.end()
            line = self.text.count("\n", 0, match.start()) + 1
            repeat = int(index.rstrip("]")) + 1 if index else 1
        return line

    def error(self, path: str, message: str, at: str | None = None):
        self.diagnostics.append(Diagnostic("error", path, message, self.line_of(at or path)))

    def warning(self, path: str, message: str):
        self.diagnostics.append(Diagnostic("warning", path, message, self.line_of(path)))

    def fields(self, data, path: str, allowed: dict, required=()):
        if not isinstance(data, dict):
            self.error(path, "expected an object")
            return False
        for key in sorted(required):
            if key not in data:
                self.error(f"{path}.{key}", "missing required field", at=path)
        for key, value in data.items():
            if key not in allowed:
                self.warning(f"{path}.{key}", "unknown field ignored")
                continue
            expected = allowed[key]
            if isinstance(value, bool) and not _accepts_bool(expected):
                self.error(f"{path}.{key}", "expected a number, got a boolean")
            elif not isinstance(value, expected):
                self.error(f"{path}.{key}", f"unexpected type {type(value).__name__}")
        return True

    def choice(self, data: dict, key: str, path: str, choices):
        """Enum-valued field; type problems are left to fields()"""
        value = data.get(key)
        if isinstance(value, str) and value not in choices:
            self.error(f"{path}.{key}", f"unknown value {value!r}; expected one of {', '.join(choices)}")

    def options(self, data, kind: ScenarioKind):
        allowed = {**OPTION_FIELDS[kind], **{key: NUMBER for key in config.NUMERIC_DEFAULTS}}
        if not self.fields(data, "options", allowed):
            return
        for key, value in data.items():
            path = f"options.{key}"
            if key not in allowed or not _matches(value, allowed[key]):
                continue
            choices = OPTION_CHOICES.get((kind, key))
            if choices is not None and value not in choices:
                self.error(path, f"unknown value {value!r}; expected one of {', '.join(map(str, choices))}")
            elif key in config.NUMERIC_DEFAULTS and not (np.isfinite(value) and value >= 0):
                self.error(path, "expected a finite non-negative number")
            elif key == "convention":
                self.convention(value, path)

    def convention(self, value, path: str):
        try:
            PMConvention.parse(value)
        except ValueError:
            self.error(path, f"unknown convention {value!r}")

    def phase(self, data, path: str):
        if not self.fields(data, path, PHASE_FIELDS, {"kind"}):
            return
        self.choice(data, "kind", path, [kind.value for kind in PhaseKind])
        values = data.get("values", [])
        if not isinstance(values, list):
            return
        for index, value in enumerate(values):
            if not _matches(value, NUMBER):
                self.error(f"{path}.values[{index}]", "expected a number", at=f"{path}.values")
        expected = PHASE_COUNTS.get(data.get("kind"))
        if expected is not None and len(values) != expected:
            self.error(f"{path}.values", f"{data['kind']} takes {expected} phase value(s)")

    def label(self, data: dict, path: str):
        if not isinstance(data.get("label"), str):
            return
        try:
            label = LogicalLabel.parse(data["label"])
        except ValueError:
            label = None
        if label in (None, LogicalLabel.RAW):
            self.error(f"{path}.label", f"{data['label']!r} is not a logical label (0, 1, +, -)")

    def grid(self, data, path: str):
        self.fields(data, path, GRID_FIELDS, GRID_FIELDS.keys())

    def amplitude(self, data, path: str):
        if not isinstance(data, dict):
            self.error(path, "expected an amplitude object")
            return
        shape = data.get("shape")
        if shape not in AMPLITUDE_FIELDS:
            self.error(f"{path}.shape", f"unknown amplitude shape {shape!r}")
            return
        allowed = {"shape": str, "grid": dict, "cavity": dict, **AMPLITUDE_FIELDS[shape]}
        self.fields(data, path, allowed, {"grid"} | AMPLITUDE_REQUIRED[shape])
        if isinstance(data.get("grid"), dict):
            self.grid(data["grid"], f"{path}.grid")
        if "cavity" in data:
            self.cavity(data["cavity"], f"{path}.cavity")
        if shape == "pump":
            self.device(data.get("device"), f"{path}.device")
            self.beams(data.get("beams"), f"{path}.beams")
            self.choice(data, "method", path, PUMP_METHODS)
        if shape == "comb":
            self.label(data, path)

    def device(self, data, path: str):
        self.fields(data, path, DEVICE_FIELDS, DEVICE_REQUIRED)

    def beams(self, data, path: str):
        if not isinstance(data, list) or not data:
            self.error(path, "expected a non-empty list of beams")
            return
        for index, beam in enumerate(data):
            self.fields(beam, f"{path}[{index}]", BEAM_FIELDS, {"waist", "theta"})

    def cavity(self, data, path: str):
        if self.fields(data, path, CAVITY_FIELDS, {"reflectivity", "roundtrip_time"}):
            self.choice(data, "detuning", path, [detuning.value for detuning in pumpeng.Detuning])

    def state(self, data, path: str):
        if not isinstance(data, dict):
            self.error(path, "expected a state object")
            return
        kind = data.get("type")
        if kind not in STATE_FIELDS:
            self.error(f"{path}.type", f"unknown state type {kind!r}")
            return
        required = {"first"} if kind == "separable" else {"plus", "minus"}
        self.fields(data, path, {"type": str, **STATE_FIELDS[kind]}, required)
        for key in ("first", "second", "plus", "minus"):
            if key in data:
                self.amplitude(data[key], f"{path}.{key}")
        if kind == "pm" and isinstance(data.get("grid"), dict):
            self.grid(data["grid"], f"{path}.grid")
        if kind == "pm" and "convention" in data:
            self.convention(data["convention"], f"{path}.convention")


def _check(data, text: str) -> list[Diagnostic]:
    checker = _Checker(text)
    if not isinstance(data, dict):
        checker.error("scenario", "top level must be a JSON object")
        return checker.diagnostics

    for key in ("name", "kind"):
        if key not in data:
            checker.error(key, "missing required field")
    if "name" in data and (not isinstance(data["name"], str) or not re.fullmatch(r"[A-Za-z0-9_.-]+", data["name"])):
        checker.error("name", "name must be a non-empty file-name-safe string")
    try:
        kind = ScenarioKind(data.get("kind"))
    except ValueError:
        if "kind" in data:
            checker.error("kind", f"unknown scenario kind {data['kind']!r}")
        return checker.diagnostics

    required, optional, axes = KIND_SECTIONS[kind]
    for key in sorted(required):
        if key not in data:
            checker.error(key, f"{kind.value} needs a '{key}' section")
    for key in data:
        if key not in COMMON_SECTIONS | required | optional:
            checker.warning(key, "unknown field ignored")

    sweep = data.get("sweep", {})
    if axes or "sweep" in data:
        if checker.fields(sweep, "sweep", {axis: dict for axis in ("mu", "tau", "t")}, axes):
            for axis, grid in sweep.items():
                if axis in ("mu", "tau", "t") and isinstance(grid, dict):
                    checker.grid(grid, f"sweep.{axis}")
    if "options" in data:
        checker.options(data["options"], kind)
    if kind is ScenarioKind.COMB_READOUT and isinstance(data.get("options"), dict):
        if data["options"].get("pairing") == "pair" and "plus" not in data:
            checker.error("plus", "pair readout needs a 'plus' amplitude", at="options.pairing")

    if "state" in data:
        checker.state(data["state"], "state")
    for key in ("amplitude", "alpha", "beta", "signal", "window", "plus"):
        if key in data:
            checker.amplitude(data[key], key)
    if "phase" in data:
        checker.phase(data["phase"], "phase")
    if "device" in data:
        checker.device(data["device"], "device")
    if "beams" in data:
        checker.beams(data["beams"], "beams")
    if "grid" in data:
        checker.grid(data["grid"], "grid")
    if "cavity" in data:
        checker.cavity(data["cavity"], "cavity")
    if "comb" in data:
        comb = data["comb"]
        if isinstance(comb, dict) and comb.get("shape", "comb") != "comb":
            checker.error("comb.shape", "comb readout needs a comb amplitude")
        elif isinstance(comb, dict):
            checker.amplitude({"shape": "comb", **comb}, "comb")
        else:
            checker.error("comb", "expected an object")
    if "gates" in data:
        gates = data["gates"]
        if not isinstance(gates, list) or any(g not in ("X", "Z") for g in gates):
            checker.error("gates", "gates must be a list of 'X' and 'Z'")
    return checker.diagnostics


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Parse and validate; raises ScenarioError listing every problem"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([Diagnostic("error", source, exc.msg, exc.lineno)]) from exc

    diagnostics = _check(data, text)
    if any(d.level == "error" for d in diagnostics):
        raise ScenarioError(diagnostics)
    for diagnostic in diagnostics:
        LOGGER.debug("%s: %s", source, diagnostic)

    kind = ScenarioKind(data["kind"])
    options = dict(config.SCENARIO_DEFAULTS.get(kind.value, {}))
    options.update(data.get("options", {}))
    return Scenario(data["name"], kind, data, options, tuple(diagnostics))


def load_scenario(path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), str(path))


def validate_text(text: str, source: str = "<scenario>") -> list[Diagnostic]:
    """Diagnostics only; never raises for schema problems"""
    try:
        return list(parse_scenario(text, source).warnings)
    except ScenarioError as exc:
        return exc.diagnostics


def catalog() -> dict[str, str]:
    """Bundled scenario name -> JSON text"""
    folder = resources.files("homscope") / "scenarios"
    entries = {}
    for item in sorted(folder.iterdir(), key=lambda entry: entry.name):
        if item.name.endswith(".json"):
            entries[item.name[: -len(".json")]] = item.read_text(encoding="utf-8")
    return entries


# ----------------------------------------------------------------------
# Builders: validated sections -> library objects
# ----------------------------------------------------------------------
def build_frequency_grid(spec: dict) -> FrequencyGrid:
    return FrequencyGrid(int(spec["n"]), float(spec.get("center", 0.0)), float(spec["span"]))


def build_time_grid(spec: dict) -> TimeGrid:
    return TimeGrid(int(spec["n"]), float(spec.get("center", 0.0)), float(spec["span"]))


def build_device(spec: dict) -> pumpeng.DeviceConfig:
    c = float(spec.get("c", pumpeng.constants.c))
    if "k_deg" in spec:
        return pumpeng.DeviceConfig(
            float(spec["length"]), float(spec["group_velocity"]), float(spec["k_deg"]),
            float(spec["omega_p"]), float(spec["theta_deg"]), c,
        )
    return pumpeng.DeviceConfig.from_degeneracy(
        float(spec["length"]), float(spec["group_velocity"]), float(spec["omega_p"]),
        float(spec["theta_deg"]), c,
    )


def build_beams(specs: list) -> list[pumpeng.PumpBeam]:
    return [
        pumpeng.PumpBeam(
            float(spec["waist"]),
            float(spec["theta"]),
            float(spec.get("z0", 0.0)),
            complex(float(spec.get("amplitude", 1.0)) * np.exp(1j * float(spec.get("phase", 0.0)))),
        )
        for spec in specs
    ]


def build_cavity(spec: dict) -> pumpeng.CavityConfig:
    try:
        detuning = pumpeng.Detuning(spec.get("detuning", "resonant"))
    except ValueError as exc:
        raise ConfigError(f"unknown cavity detuning {spec.get('detuning')!r}") from exc
    return pumpeng.CavityConfig(float(spec["reflectivity"]), float(spec["roundtrip_time"]), detuning)


def build_pump_fminus(device, beams, grid: FrequencyGrid, method: str) -> SpectralAmplitude:
    if method == "closed_form":
        return pumpeng.superpose_fminus(beams, device, grid)[0]
    z = pumpeng.z_grid(device, beams)
    profile = pumpeng.pump_profile(beams, z, device)
    return pumpeng.phase_matching_amplitude(profile, z, device, grid, method=method, beams=beams)


def build_comb(spec: dict) -> gkpcomb.CombState:
    grid = build_frequency_grid(spec["grid"])
    center = float(spec["center"]) if "center" in spec else None
    if spec.get("ideal", False):
        return gkpcomb.ideal_comb(spec["label"], float(spec["spacing"]), grid, center)
    if "tooth_width" not in spec:
        raise ConfigError("a comb needs 'tooth_width' unless it is ideal")
    envelope = spec.get("envelope_width")
    return gkpcomb.encode(
        spec["label"], float(spec["spacing"]), float(spec["tooth_width"]),
        None if envelope is None else float(envelope), grid, center,
    )


def build_amplitude(spec: dict) -> SpectralAmplitude:
    shape = spec["shape"]
    grid = build_frequency_grid(spec["grid"])
    if shape == "gaussian":
        amplitude = biphoton.gaussian_amplitude(
            grid, float(spec.get("center", 0.0)), float(spec["width"]), float(spec.get("delay", 0.0))
        )
    elif shape == "hermite1":
        amplitude = biphoton.hermite_amplitude(
            grid, float(spec.get("center", 0.0)), float(spec["width"]), float(spec.get("delay", 0.0))
        )
    elif shape == "pump":
        amplitude = build_pump_fminus(
            build_device(spec["device"]), build_beams(spec["beams"]), grid, spec.get("method", "fft")
        )
    elif shape == "comb":
        amplitude = build_comb(spec).amplitude
    else:
        raise ConfigError(f"unknown amplitude shape {shape!r}")
    if "cavity" in spec:
        amplitude = pumpeng.cavity_comb(amplitude, build_cavity(spec["cavity"]))
    return amplitude


def build_state(spec: dict):
    """Returns (jsa, convention)"""
    if spec["type"] == "separable":
        first = build_amplitude(spec["first"])
        second = build_amplitude(spec["second"]) if "second" in spec else first
        return biphoton.separable_jsa(first, second, float(spec.get("phase", 0.0))), PMConvention.HALVED
    convention = PMConvention.parse(spec.get("convention", "halved"))
    grid = build_frequency_grid(spec["grid"]) if "grid" in spec else None
    jsa = biphoton.jsa_from_pm(build_amplitude(spec["plus"]), build_amplitude(spec["minus"]), convention, grid)
    return jsa, convention


def build_phase(spec: dict) -> PhaseDistribution:
    try:
        kind = PhaseKind(spec["kind"])
    except ValueError as exc:
        raise ConfigError(f"unknown phase distribution {spec['kind']!r}") from exc
    return PhaseDistribution(kind, tuple(float(v) for v in spec.get("values", ())))

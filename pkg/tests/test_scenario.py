import json

import pytest

from homscope import scenario
from homscope.errors import ConfigError, ScenarioError
from homscope.runner import run_scenario
from homscope.scenario import ScenarioKind

GAUSSIAN = {"shape": "gaussian", "grid": {"n": 64, "center": 0.0, "span": 16.0}, "width": 1.0}


def _hom_scan(**extra):
    data = {
        "name": "sample",
        "kind": "hom_scan",
        "state": {"type": "separable", "first": GAUSSIAN},
        "sweep": {"tau": {"n": 16, "center": 0.0, "span": 4.0}},
    }
    data.update(extra)
    return json.dumps(data, indent=2)


def _errors(text):
    return [d for d in scenario.validate_text(text) if d.level == "error"]


def test_catalog_covers_every_kind():
    entries = scenario.catalog()
    kinds = {scenario.parse_scenario(text, name).kind for name, text in entries.items()}
    assert kinds == set(ScenarioKind)


@pytest.mark.parametrize("name", sorted(scenario.catalog()))
def test_bundled_scenarios_are_valid(name):
    parsed = scenario.parse_scenario(scenario.catalog()[name], name)
    assert parsed.name == name
    assert parsed.warnings == ()


def test_defaults_are_merged_under_explicit_options():
    parsed = scenario.parse_scenario(_hom_scan(options={"mu": 0.5}))
    assert parsed.options == {"convention": "halved", "mu": 0.5}
    assert parsed.resolved()["options"] == parsed.options
    assert "options" not in json.loads(_hom_scan())


def test_unknown_field_is_a_warning():
    parsed = scenario.parse_scenario(_hom_scan(colour="blue"))
    assert [d.field for d in parsed.warnings] == ["colour"]
    assert parsed.warnings[0].level == "warning"


def test_syntax_error_reports_its_line():
    with pytest.raises(ScenarioError) as excinfo:
        scenario.parse_scenario('{\n  "name": "x",\n  "kind": \n}')
    assert excinfo.value.diagnostics[0].line == 4


def test_unknown_kind():
    [error] = _errors(json.dumps({"name": "x", "kind": "tomography"}))
    assert error.field == "kind"


def test_every_problem_is_reported_at_once():
    text = _hom_scan(sweep={})
    text = text.replace('"width": 1.0', '"width": "wide"')
    fields = {d.field for d in _errors(text)}
    assert fields == {"sweep.tau", "state.first.width"}


def test_boolean_is_not_a_number():
    text = (
        '{\n'
        '  "name": "sample",\n'
        '  "kind": "hom_scan",\n'
        '  "state": {"type": "separable", "first": {"shape": "gaussian", '
        '"grid": {"n": true, "center": 0, "span": 8}, "width": 1}},\n'
        '  "sweep": {"tau": {"n": 16, "center": 0, "span": 4}}\n'
        '}'
    )
    [error] = _errors(text)
    assert error.field == "state.first.grid.n"
    assert error.line == 4
    assert "boolean" in error.message


def test_missing_kind_section():
    data = json.loads(_hom_scan())
    del data["state"]
    [error] = _errors(json.dumps(data))
    assert error.field == "state"


def test_invalid_gate_name():
    data = {
        "name": "gates",
        "kind": "comb_readout",
        "comb": {"label": "0", "spacing": 1.0, "ideal": True, "grid": {"n": 64, "center": 0.0, "span": 16.0}},
        "gates": ["Y"],
        "sweep": {"tau": {"n": 8, "center": 0.0, "span": 2.0}},
    }
    assert [d.field for d in _errors(json.dumps(data))] == ["gates"]


def test_comb_needs_tooth_width_unless_ideal():
    spec = {"label": "0", "spacing": 1.0, "grid": {"n": 64, "center": 0.0, "span": 16.0}}
    with pytest.raises(ConfigError):
        scenario.build_comb(spec)
    assert scenario.build_comb({**spec, "ideal": True}).periodic


def test_unknown_cavity_detuning():
    with pytest.raises(ConfigError):
        scenario.build_cavity({"reflectivity": 0.3, "roundtrip_time": 2.0, "detuning": "sideways"})


def test_load_scenario_from_disk(tmp_path):
    path = tmp_path / "sample.json"
    path.write_text(_hom_scan(), encoding="utf-8")
    assert scenario.load_scenario(path).kind is ScenarioKind.HOM_SCAN


@pytest.mark.parametrize(
    "name, key, expected, tolerance",
    [
        ("gaussian_dip", "visibility", 1.0, 1e-6),
        ("phase_independent_dip", "visibility", 1.0, 1e-6),
        ("classical_uniform", "visibility", 0.5, 1e-3),
        ("classical_two_point", "visibility", 1.0, 1e-3),
        ("antisymmetric_peak", "max", 1.0, 1e-6),
    ],
)
def test_bundled_runs_reproduce_reference_values(name, key, expected, tolerance):
    result = run_scenario(scenario.parse_scenario(scenario.catalog()[name], name))
    assert result.sidecar["derived"][key] == pytest.approx(expected, abs=tolerance)


@pytest.mark.parametrize("name, fired", [("antisymmetric_peak", True), ("gaussian_dip", False),
                                         ("frequency_cat_witness", True), ("gaussian_wigner", False)])
def test_bundled_witness_verdicts(name, fired):
    result = run_scenario(scenario.parse_scenario(scenario.catalog()[name], name))
    assert result.sidecar["derived"]["witness_fired"] is fired


def test_bundled_x_gate_flips_the_label():
    result = run_scenario(scenario.parse_scenario(scenario.catalog()["comb_x_gate"], "comb_x_gate"))
    derived = result.sidecar["derived"]
    assert derived["label"] == "1"
    assert derived["logical_overlaps"]["1"] > 0.9
    assert derived["logical_overlaps"]["0"] < 1e-6


def _line_with(text, fragment):
    return next(number for number, line in enumerate(text.splitlines(), 1) if fragment in line)


def test_nested_field_reports_its_own_line():
    text = _hom_scan(sweep={"tau": {"n": 16, "center": 0.0, "span": "wide"}})
    [error] = _errors(text)
    assert error.field == "sweep.tau.span"
    assert error.line == _line_with(text, '"span": "wide"')
    assert error.line != _line_with(text, '"span": 16.0')


def test_missing_field_reports_its_parent_line():
    text = _hom_scan(sweep={"tau": {"n": 16, "center": 0.0}})
    [error] = _errors(text)
    assert error.field == "sweep.tau.span"
    assert error.line == _line_with(text, '"tau"')


def test_list_entries_report_their_own_line():
    data = json.loads(scenario.catalog()["time_cat_pump"])
    data["beams"][1]["waist"] = "x"
    text = json.dumps(data, indent=2)
    [error] = _errors(text)
    assert error.field == "beams[1].waist"
    assert error.line == _line_with(text, '"waist": "x"')


@pytest.mark.parametrize(
    "options, field",
    [
        ({"mu": "abc"}, "options.mu"),
        ({"arm": True}, "options.arm"),
        ({"arm": 0}, "options.arm"),
        ({"convention": "diagonal"}, "options.convention"),
        ({"max_norm_loss": "big"}, "options.max_norm_loss"),
        ({"clamp_tolerance": -1.0}, "options.clamp_tolerance"),
    ],
)
def test_invalid_options(options, field):
    assert [d.field for d in _errors(_hom_scan(options=options))] == [field]


def test_unknown_option_is_a_warning():
    parsed = scenario.parse_scenario(_hom_scan(options={"speed": 2}))
    assert [d.field for d in parsed.warnings] == ["options.speed"]


def test_numeric_options_are_accepted():
    parsed = scenario.parse_scenario(_hom_scan(options={"max_norm_loss": 0.05, "arm": 1}))
    assert parsed.options["max_norm_loss"] == 0.05


def _comb_readout(**extra):
    data = {
        "name": "comb",
        "kind": "comb_readout",
        "comb": {"label": "0", "spacing": 1.0, "ideal": True, "grid": {"n": 64, "center": 0.0, "span": 16.0}},
        "sweep": {"tau": {"n": 8, "center": 0.0, "span": 2.0}},
    }
    data.update(extra)
    return json.dumps(data, indent=2)


@pytest.mark.parametrize("label", ["2", "raw", "two"])
def test_comb_needs_a_logical_label(label):
    text = _comb_readout().replace('"label": "0"', f'"label": "{label}"')
    assert [d.field for d in _errors(text)] == ["comb.label"]


def test_pair_readout_needs_a_sum_amplitude():
    assert [d.field for d in _errors(_comb_readout(options={"pairing": "pair"}))] == ["plus"]


@pytest.mark.parametrize(
    "phase, fields",
    [
        ({"kind": "two_point", "values": ["a", "b"]}, ["phase.values[0]", "phase.values[1]"]),
        ({"kind": "fixed", "values": [0.0, 1.0]}, ["phase.values"]),
        ({"kind": "gaussian"}, ["phase.kind"]),
        ({"kind": "fixed", "values": [True]}, ["phase.values[0]"]),
    ],
)
def test_invalid_phase_distribution(phase, fields):
    data = json.loads(scenario.catalog()["classical_fixed"])
    data["phase"] = phase
    assert [d.field for d in _errors(json.dumps(data, indent=2))] == fields


def test_unknown_pump_method():
    data = json.loads(scenario.catalog()["time_cat_pump"])
    data["options"]["method"] = "wavelet"
    assert [d.field for d in _errors(json.dumps(data))] == ["options.method"]

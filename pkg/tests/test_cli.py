import json

import pytest
from loguru import logger
from typer.testing import CliRunner

from crossed_kuperberg import paths
from crossed_kuperberg.cli import app

runner = CliRunner()


@pytest.fixture(autouse=True)
def drop_cli_sinks():
    """The callback points loguru at the runner's captured stderr."""
    yield
    logger.remove()


def run(*args, input=None):
    return runner.invoke(app, [str(a) for a in args], input=input)


def builtin_json(*args):
    result = run("builtin", *args)
    assert result.exit_code == 0, result.output
    return result.stdout


@pytest.fixture
def files(tmp_path):
    """Builtin documents written to disk: L(2, 1), L(4, 1), kp4, Z/4 -> Z/2 and k[Z/2]."""
    out = {}
    for key, args in {
        "rp3": ("lens", 2, 1),
        "l41": ("lens", 4, 1),
        "kp4": ("kp4",),
        "z4z2": ("z4z2",),
        "kz2": ("group-algebra", 2),
    }.items():
        path = tmp_path / f"{key}.json"
        result = run("builtin", *args, "-o", path)
        assert result.exit_code == 0, result.output
        out[key] = path
    return out


def test_builtin_lens_validates_from_stdin():
    result = run("validate", "-", input=builtin_json("lens", 5, 2))
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout) == {"format": 1, "violations": []}


def test_builtin_rejects_bad_parameters():
    assert run("builtin", "lens", 4, 2).exit_code == 2
    assert run("builtin", "lens", 3).exit_code == 2
    assert run("builtin", "klein").exit_code == 2
    assert run("builtin", "kp4", "--field", "nope").exit_code == 2


def test_broken_diagram_reports_violations(tmp_path):
    data = json.loads(builtin_json("lens", 3, 1))
    data["genus"] = 4
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    result = run("validate", path)
    assert result.exit_code == 1


def test_invariant_on_a_labeled_projective_space(files):
    labeling = json.dumps({"alpha": {"u": 1}, "beta": {"l": 0}})
    result = run("invariant", "--diagram", files["rp3"], "--hopf", files["kp4"], "--labeling", labeling)
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["value"] == "3/4"
    assert data["field"] == "Q"
    assert data["normalization_exponent"] == -1

    result = run(
        "invariant", "--diagram", files["rp3"], "--xmod", files["z4z2"], "--hopf", files["kp4"], "--labeling", labeling
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["value"] == "3/4"


def test_invariant_labeling_from_a_file(files, tmp_path):
    path = tmp_path / "lab.json"
    path.write_text(json.dumps({"alpha": {"u": 1}, "beta": {"l": 2}}))
    result = run("-s", "naive", "invariant", "--diagram", files["rp3"], "--hopf", files["kp4"], "--labeling", path)
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["value"] == "3/4"


def test_invariant_over_every_labeling(files):
    result = run("invariant", "--diagram", files["rp3"], "--hopf", files["kp4"], "--all")
    assert result.exit_code == 0, result.output
    values = [r["value"] for r in json.loads(result.stdout)["results"]]
    assert values == ["1", "0", "1", "0", "3/4", "3/4"]


def test_invalid_labeling_exits_with_report(files):
    labeling = json.dumps({"alpha": {"u": 1}, "beta": {"l": 1}})
    result = run("invariant", "--diagram", files["rp3"], "--hopf", files["kp4"], "--labeling", labeling)
    assert result.exit_code == 1


def test_labelings_and_orbits(files):
    result = run("labelings", "--diagram", files["rp3"], "--xmod", files["z4z2"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["count"] == 6

    result = run("labelings", "--diagram", files["rp3"], "--hopf", files["kp4"], "--orbits", "--invariants")
    assert result.exit_code == 0, result.output
    classes = json.loads(result.stdout)["classes"]
    assert [c["size"] for c in classes] == [2, 2, 1, 1]
    assert [c["invariant"] for c in classes] == ["1", "0", "3/4", "3/4"]


def test_labelings_table_and_missing_hopf(files):
    result = run("labelings", "--diagram", files["rp3"], "--hopf", files["kp4"], "--orbits", "--table")
    assert result.exit_code == 0
    assert run("labelings", "--diagram", files["rp3"], "--xmod", files["z4z2"], "--invariants").exit_code == 2
    assert run("labelings", "--diagram", files["rp3"]).exit_code == 2


def test_labeling_budget(files):
    result = run("-b", "2", "labelings", "--diagram", files["l41"], "--xmod", files["z4z2"])
    assert result.exit_code == 1
    data = json.loads(result.stdout)
    assert data["format"] == 1
    assert [v["code"] for v in data["violations"]] == ["budget-exceeded"]
    assert run("-b", "0", "config").exit_code == 2


def test_kuperberg(files):
    result = run("kuperberg", "--diagram", files["l41"], "--hopf", files["kz2"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout) == {"value": "2", "field": "Q"}
    # kp4 is graded by a nontrivial crossed module
    result = run("kuperberg", "--diagram", files["l41"], "--hopf", files["kp4"])
    assert result.exit_code == 1
    assert [v["code"] for v in json.loads(result.stdout)["violations"]] == ["invalid-hopf-data"]


def test_checks(files):
    assert run("check-xmod", files["z4z2"], "--homotopy").exit_code == 0
    assert run("check-hopf", files["kp4"], "--derived").exit_code == 0
    result = run("integrals", files["kp4"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["Lambda"] == ["1", "1", "1", "1"]


def test_mutated_hopf_data_fails_the_check(files, tmp_path):
    data = json.loads(files["kp4"].read_text())
    data["counit"][0] = "2"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    result = run("check-hopf", path)
    assert result.exit_code == 1
    assert run("invariant", "--diagram", files["rp3"], "--hopf", path).exit_code == 1


def test_moves_keep_the_value(files, tmp_path):
    script = tmp_path / "script.json"
    script.write_text(json.dumps([
        {"kind": "two_point", "upper": "u", "lower": "l", "lower_pos": 1, "upper_pos": 0},
        {"kind": "basepoint", "lower": "l", "steps": 1},
        {"kind": "stabilize", "region": "r", "color": 3},
    ]))
    labeling = json.dumps({"alpha": {"u": 1}, "beta": {"l": 2}})
    result = run("moves", "--diagram", files["rp3"], "--script", script, "--hopf", files["kp4"], "--labeling", labeling)
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["before"] == data["after"] == "3/4"
    assert data["diagram"]["genus"] == 2


def test_move_precondition_failure(files, tmp_path):
    script = tmp_path / "script.json"
    script.write_text(json.dumps({"moves": [{"kind": "slide_upper", "moving": "u", "over": "u"}]}))
    result = run("moves", "--diagram", files["rp3"], "--script", script, "--xmod", files["z4z2"])
    assert result.exit_code == 1


def test_input_errors(files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("validate", bad).exit_code == 2
    assert run("validate", tmp_path / "missing.json").exit_code == 2
    assert run("-s", "random", "config").exit_code == 2
    assert run("invariant", "--diagram", files["rp3"], "--hopf", bad).exit_code == 2
    assert run("invariant", "--diagram", files["rp3"], "--hopf", files["kp4"], "--labeling", "{\"alpha\": 1}").exit_code == 2


def test_config(monkeypatch):
    result = run("config")
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["settings"] == {"budget": paths.DEFAULT_BUDGET, "strategy": "greedy"}

    monkeypatch.setenv(paths.STRATEGY_ENV, "naive")
    result = run("-b", "12", "config", "--save")
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["settings"] == {"budget": 12, "strategy": "naive"}
    monkeypatch.delenv(paths.STRATEGY_ENV)
    assert paths.load_settings().budget == 12
    paths.SETTINGS_FILE.unlink()

import json
import subprocess
import sys

import pytest

from hopelogic import io
from hopelogic.cli import main
from hopelogic.scenarios import private_correction_update
from hopelogic.update import product

EX1 = "[~H{a} false | K{b} H{a} false, ~H{b} false] K{a} ~H{a} false"


@pytest.fixture
def base_file(tmp_path, base):
    path = tmp_path / "base.json"
    io.dump_json(io.model_to_dict(base), path)
    return str(path)


@pytest.fixture
def update_file(tmp_path):
    path = tmp_path / "U.json"
    io.dump_json(io.update_to_dict(private_correction_update()), path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_true(capsys, base_file):
    code, out, _ = run(capsys, "eval", base_file, "00", EX1)
    assert code == 0 and out.strip() == "true"


def test_eval_false_and_cross_check(capsys, base_file):
    code, out, _ = run(capsys, "eval", base_file, "00", "K{a} ~H{a} false", "--cross-check")
    assert code == 1 and out.strip() == "false"


def test_eval_everywhere_structured(capsys, base_file):
    code, out, _ = run(capsys, "eval", base_file, "*", "~H{a} false", "--format", "structured")
    assert code == 1
    assert json.loads(out) == {"valid": False, "witness": "10"}


def test_eval_with_update_model(capsys, base_file, update_file):
    code, out, _ = run(capsys, "eval", base_file, "01", "[U:c] K{a} ~H{a} false", "--update", update_file)
    assert code == 0


def test_validate_ok(capsys, base_file):
    code, out, _ = run(capsys, "validate", base_file)
    assert code == 0 and "in KH" in out


def test_validate_broken_model_names_oneH(capsys, tmp_path, base):
    doc = io.model_to_dict(base)
    del doc["correct"]
    doc["H"] = {"a": [["00", "00"], ["01", "01"]], "b": []}
    path = tmp_path / "broken.json"
    io.dump_json(doc, path)
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 3 and "oneH" in out
    code, _, err = run(capsys, "eval", str(path), "00", "true")
    assert code == 3 and "oneH" in err


def test_update_round_trip(capsys, tmp_path, base, base_file, update_file):
    out_path = tmp_path / "cube.json"
    code, out, _ = run(capsys, "update", base_file, "--update", update_file, "--with", "U", "-o", str(out_path))
    assert code == 0 and "8 worlds" in out
    assert io.load_model(out_path) == product(base, private_correction_update())


def test_public_update(capsys, base_file):
    code, out, _ = run(capsys, "update", base_file, "--public", "~H{a} false | p_b", "~H{b} false")
    assert code == 0
    assert sorted(json.loads(out)["correct"]["a"]) == ["00", "01", "11"]


def test_update_needs_exactly_one_spec(capsys, base_file):
    code, _, err = run(capsys, "update", base_file)
    assert code == 2 and "exactly one" in err


def test_translate_with_trace(capsys):
    code, out, _ = run(capsys, "translate", "[~H{a} false, ~H{b} false] H{a} q", "--trace")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "H{a} false | B{a} q"  # printer folds the clause back into belief
    assert lines[1] == "# trace" and "pub-hope" in lines[2]


def test_countermodel_found_and_written(capsys, tmp_path):
    out_path = tmp_path / "cm.json"
    code, out, _ = run(capsys, "countermodel", "~H{a} false -> K{a} ~H{a} false", "-o", str(out_path))
    assert code == 1 and "countermodel at world" in out
    assert io.load_model(out_path)


def test_countermodel_none(capsys):
    code, out, _ = run(capsys, "countermodel", "H{a} ~H{a} false", "--bounds-models", "500")
    assert code == 0 and out.startswith("none within bounds")


def test_scenarios(capsys):
    code, out, _ = run(capsys, "scenario", "list")
    assert code == 0 and "abp-recovery" in out
    code, out, _ = run(capsys, "scenario", "run", "--all")
    assert code == 0 and out.rstrip().endswith("9/9 scenarios passed")
    code, out, _ = run(capsys, "scenario", "run", "fail-safe", "--format", "structured")
    assert code == 0 and json.loads(out)[0]["ok"]


def test_scenario_export_reloads(capsys):
    code, out, _ = run(capsys, "scenario", "export", "private-correction")
    doc = json.loads(out)
    m = io.model_from_dict(doc["model"])
    U = io.update_from_dict(doc["updates"]["U"])
    assert U == private_correction_update() and len(m.worlds) == 4


def test_export_dot(capsys, base_file):
    code, out, _ = run(capsys, "export-dot", base_file)
    assert code == 0 and out.startswith('graph "M"')
    assert '"00" -- "01" [label="a"]' in out
    assert '"00" -- "00"' not in out
    assert "correct: a" in out


@pytest.mark.parametrize("argv,code", [
    (["eval", "missing.json", "00", "true"], 2),
    (["frobnicate"], 2),
    (["scenario", "run"], 2),
    (["scenario", "run", "nope"], 2),
])
def test_usage_errors(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_parse_error_has_position(capsys, base_file):
    code, _, err = run(capsys, "eval", base_file, "00", "K{a} (p_a &")
    assert code == 2 and "line 1, column" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hopelogic.cli", "scenario", "list"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "intro-correction" in proc.stdout

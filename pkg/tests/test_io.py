import json

import pytest
from hypothesis import given

from hopelogic import io
from hopelogic.kripke import ModelError
from hopelogic.scenarios import builtin_scenarios, private_correction_update, receiver_recovery_update
from strategies import kh_models


@given(kh_models())
def test_model_document_round_trip(m):
    doc = json.loads(json.dumps(io.model_to_dict(m)))
    assert io.model_from_dict(doc) == m


def test_raw_hope_form(base):
    doc = io.model_to_dict(base)
    del doc["correct"]
    doc["H"] = {i: [list(pair) for pair in sorted(base.hope_relation(i))] for i in base.agents}
    assert io.model_from_dict(doc) == base


def test_broken_hope_reports_conditions(base):
    doc = io.model_to_dict(base)
    del doc["correct"]
    doc["H"] = {"a": [["00", "00"], ["01", "01"]], "b": [["01", "11"]]}
    report = io.validate_dict(doc)
    assert {"oneH", "shift-serial"} <= report.conditions()
    with pytest.raises(ModelError) as exc:
        io.model_from_dict(doc)
    assert exc.value.report is not None


def test_correct_set_with_unknown_world(base):
    doc = io.model_to_dict(base)
    doc["correct"]["a"].append("zz")
    assert "unknown-world" in io.validate_dict(doc).conditions()


@pytest.mark.parametrize("missing", ["agents", "worlds", "valuation", "K"])
def test_missing_fields(base, missing):
    doc = io.model_to_dict(base)
    del doc[missing]
    with pytest.raises(io.DocumentError, match=missing):
        io.model_from_dict(doc)


def test_needs_correct_or_hope(base):
    doc = io.model_to_dict(base)
    del doc["correct"]
    with pytest.raises(io.DocumentError):
        io.model_from_dict(doc)


@pytest.mark.parametrize("make", [private_correction_update, receiver_recovery_update])
def test_update_document_round_trip(make):
    U = make()
    back = io.update_from_dict(json.loads(json.dumps(io.update_to_dict(U))))
    assert back == U


def test_update_document_shorthand_partitions():
    doc = {"name": "V", "agents": ["a", "b"], "actions": ["x", "y"],
           "theta": {"x": ["true", "p"], "y": {"a": "~H{a} false", "b": "false"}},
           "KU": {"a": "identity", "b": "universal"}}
    V = io.update_from_dict(doc)
    assert V.classes == ((("x",), ("y",)), (("x", "y"),))


def test_public_vector_arity():
    with pytest.raises(io.DocumentError):
        io.vector_from_list(["p"], ("a", "b"))
    assert len(io.vector_from_list(["p", "q"], ("a", "b"))) == 2


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(io.DocumentError, match="invalid JSON"):
        io.load_json(path)


def test_scenario_models_round_trip(tmp_path):
    for s in builtin_scenarios():
        path = tmp_path / f"{s.name}.json"
        io.dump_json(io.model_to_dict(s.model), path)
        assert io.load_model(path) == s.model

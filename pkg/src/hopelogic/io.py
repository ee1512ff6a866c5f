"""JSON interchange for models, update models and public update vectors.

Model document::

    {"agents": [...], "props": [...], "worlds": [...],
     "valuation": {world: [true props]},
     "K": {agent: [[worlds of one class], ...]},
     "correct": {agent: [worlds]}}            # or "H": {agent: [[w, v], ...]}

Update model document::

    {"name": "U", "agents": [...], "actions": [...],
     "theta": {action: {agent: formula}},
     "sigma": {action: {prop: formula}},       # optional
     "KU": {agent: [[actions of one class], ...] | "identity" | "universal"}}

Formulas are strings in the concrete syntax of ``hopelogic.syntax``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from .kripke import CandidateModel, KripkeModel, ModelError, build_model, validate
from .syntax import parse, to_text
from .update import HopeUpdateModel


class DocumentError(ValueError):
    """A document is missing fields or has the wrong shape."""


def _need(doc, key, kind):
    if key not in doc:
        raise DocumentError(f"{kind} document lacks field {key!r}")
    return doc[key]


def model_to_dict(model: KripkeModel) -> dict:
    return {
        "agents": list(model.agents),
        "props": list(model.props),
        "worlds": list(model.worlds),
        "valuation": {w: sorted(model.true_props(w)) for w in model.worlds},
        "K": {i: [sorted(c, key=model.index.get) for c in model.partition(i)] for i in model.agents},
        "correct": {i: sorted(model.correct_set(i), key=model.index.get) for i in model.agents},
    }


def candidate_from_dict(doc: Mapping) -> CandidateModel:
    """Explicit relations described by a model document (not yet validated)."""
    if not isinstance(doc, Mapping):
        raise DocumentError("model document must be a JSON object")
    agents = list(_need(doc, "agents", "model"))
    worlds = list(_need(doc, "worlds", "model"))
    props = list(doc.get("props", []))
    valuation = {p: set() for p in props}
    for w, true in _need(doc, "valuation", "model").items():
        for p in true:
            valuation.setdefault(p, set()).add(w)
    K_doc = _need(doc, "K", "model")
    K = {}
    for i in agents:
        classes = K_doc.get(i)
        if classes is None:
            raise DocumentError(f"no knowledge classes for agent {i!r}")
        K[i] = {(w, v) for c in classes for w in c for v in c}
    if "H" in doc:
        H = {i: {tuple(pair) for pair in doc["H"].get(i, [])} for i in agents}
    elif "correct" in doc:
        H = {}
        for i in agents:
            c = set(doc["correct"].get(i, []))
            H[i] = {(w, v) for (w, v) in K[i] if w in c and v in c}
            stray = c - set(worlds)
            if stray:
                H[i] |= {(w, w) for w in stray}  # surfaces as unknown-world in validation
    else:
        raise DocumentError("model document needs either 'correct' or 'H'")
    return CandidateModel(agents, props, worlds, valuation, K, H)


def model_from_dict(doc: Mapping) -> KripkeModel:
    """Validate and normalise; raises ``ModelError`` with the report if not in KH."""
    return build_model(candidate_from_dict(doc))


def validate_dict(doc: Mapping):
    return validate(candidate_from_dict(doc))


def update_to_dict(U: HopeUpdateModel) -> dict:
    out = {
        "name": U.name,
        "agents": list(U.agents),
        "actions": list(U.actions),
        "theta": {e: {i: to_text(U.hope_formula(e, i)) for i in U.agents} for e in U.actions},
        "KU": {i: [list(b) for b in U.classes[j]] for j, i in enumerate(U.agents)},
    }
    sigma = {e: {p: to_text(f) for p, f in U.overrides(e).items()} for e in U.actions if U.overrides(e)}
    if sigma:
        out["sigma"] = sigma
    return out


def update_from_dict(doc: Mapping, agents=None, props=None, updates=None) -> HopeUpdateModel:
    """Build an update model; ``updates`` resolves ``[V:f]`` inside its formulas."""
    if not isinstance(doc, Mapping):
        raise DocumentError("update model document must be a JSON object")
    agents = list(doc.get("agents") or agents or [])
    if not agents:
        raise DocumentError("update model document lacks field 'agents'")
    actions = list(_need(doc, "actions", "update model"))
    name = doc.get("name", "U")

    def f(text):
        return parse(text, agents, props, updates)

    theta = {}
    for e, row in _need(doc, "theta", "update model").items():
        if isinstance(row, Mapping):
            theta[e] = {i: f(t) for i, t in row.items()}
        else:
            theta[e] = [f(t) for t in row]
    sigma = {e: {p: f(t) for p, t in over.items()} for e, over in doc.get("sigma", {}).items()}
    return HopeUpdateModel.create(name, agents, actions, theta, _need(doc, "KU", "update model"), sigma)


def vector_from_list(texts, agents, props=None, updates=None) -> tuple:
    if isinstance(texts, str) or len(texts) != len(agents):
        raise DocumentError(f"a public update needs a list of {len(agents)} formulas")
    return tuple(parse(t, agents, props, updates) for t in texts)


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_model(path) -> KripkeModel:
    return model_from_dict(load_json(path))


def load_update(path, agents=None, props=None, updates=None) -> HopeUpdateModel:
    return update_from_dict(load_json(path), agents, props, updates)


__all__ = [
    "DocumentError", "ModelError", "model_to_dict", "model_from_dict", "candidate_from_dict",
    "validate_dict", "update_to_dict", "update_from_dict", "vector_from_list", "load_json",
    "dump_json", "load_model", "load_update",
]

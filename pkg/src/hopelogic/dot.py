"""Graphviz export of KH models.

Nodes are worlds labelled with their true atoms; agents correct at a world
are listed under the label and the node is drawn bold when anyone is
correct there. Knowledge edges are undirected, one per agent and pair of
distinct worlds in the same class.
"""
from __future__ import annotations

from .kripke import KripkeModel


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _q(s: str) -> str:
    return f'"{_esc(s)}"'


def to_dot(model: KripkeModel, name: str = "M") -> str:
    lines = [f"graph {_q(name)} {{", "  node [shape=box, fontname=monospace];"]
    for w in model.worlds:
        atoms = ",".join(sorted(model.true_props(w))) or "-"
        ok = [i for i in model.agents if model.is_correct(w, i)]
        label = "\\n".join(_esc(x) for x in (w, atoms, "correct: " + (" ".join(ok) or "-")))
        style = ", style=bold" if ok else ""
        lines.append(f'  {_q(w)} [label="{label}"{style}];')
    for i in model.agents:
        for cls in model.partition(i):
            ws = sorted(cls, key=model.index.get)
            for a in range(len(ws)):
                for b in range(a + 1, len(ws)):
                    lines.append(f"  {_q(ws[a])} -- {_q(ws[b])} [label={_q(i)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

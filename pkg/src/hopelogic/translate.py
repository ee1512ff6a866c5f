"""Rewriting dynamic formulas into the static language of knowledge and hope.

``translate`` is a top-down structural recursion: static connectives are
copied, and an update operator is pushed one level into its argument by a
reduction equivalence, after which the result is translated again. Each such
unfolding is recorded in a ``RewriteTrace`` together with the complexity of
the redex before and after; the complexity has to go down every time.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import update
from .formula import (
    Atom, Conj, DynUpdate, Formula, Hope, Know, Neg, PubUpdate, Top, agents_of, big_and, complexity,
    implies, subformulas,
)
from .kripke import bits


class NonDecreasingStep(AssertionError):
    """A rewrite step failed to lower the complexity measure."""


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    position: tuple
    before: int
    after: int

    def __str__(self):
        where = ".".join(map(str, self.position)) or "root"
        return f"{self.rule:<14} at {where}: {self.before} -> {self.after}"


@dataclass
class RewriteTrace:
    """Rewrite steps in the order they were unfolded.

    ``position`` is the path of child names from the root of the term under
    translation down to the redex; a rewritten redex keeps its position.
    """

    steps: list = field(default_factory=list)

    def record(self, rule, position, before, after):
        step = RewriteStep(rule, position, before, after)
        if after >= before:
            raise NonDecreasingStep(str(step))
        self.steps.append(step)

    @property
    def strictly_decreasing(self) -> bool:
        return all(s.after < s.before for s in self.steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def lines(self) -> list:
        return [str(s) for s in self.steps]


def translate(phi: Formula, agents=None) -> tuple:
    """``(t(phi), trace)`` with ``t(phi)`` free of update operators.

    ``agents`` fixes which vector position belongs to which agent in public
    updates. If omitted it is taken from an embedded update model, or else
    the sorted agents mentioned in ``phi``.
    """
    if agents is None:
        agents = _infer_agents(phi)
    trace = RewriteTrace()
    out = _Translator(trace, agents).t(phi, ())
    return out, trace


def to_static(phi: Formula, agents=None) -> Formula:
    return translate(phi, agents)[0]


def dynamic_positions(phi: Formula) -> list:
    """Paths to every update operator in ``phi`` (payloads not searched)."""
    out, stack = [], [(phi, ())]
    while stack:
        f, pos = stack.pop()
        k = type(f)
        if k is PubUpdate or k is DynUpdate:
            out.append(pos)
        elif k is Conj:
            stack += [(f.right, pos + ("right",)), (f.left, pos + ("left",))]
        elif k in (Neg, Know, Hope):
            stack.append((f.body, pos + ("body",)))
    return out


def lint_static(phi: Formula):
    """Raise ``ValueError`` if ``phi`` still contains an update operator."""
    found = dynamic_positions(phi)
    if found:
        where = ", ".join(".".join(p) or "root" for p in found)
        raise ValueError(f"formula contains update operators at {where}")


class _Translator:
    def __init__(self, trace, agents):
        self.trace = trace
        self.agents = tuple(agents)
        self.memo = {}
        self.composed = {}

    def position(self, agent, vec):
        if len(vec) != len(self.agents):
            raise ValueError(f"public update has {len(vec)} formulas for agents {list(self.agents)}")
        try:
            return self.agents.index(agent)
        except ValueError:
            raise ValueError(f"unknown agent {agent!r}") from None

    def t(self, phi, pos):
        hit = self.memo.get(phi)
        if hit is not None:
            return hit
        k = type(phi)
        if k is Atom or k is Top:
            out = phi
        elif k is Neg:
            out = Neg(self.t(phi.body, pos + ("body",)))
        elif k is Conj:
            out = Conj(self.t(phi.left, pos + ("left",)), self.t(phi.right, pos + ("right",)))
        elif k is Know:
            out = Know(phi.agent, self.t(phi.body, pos + ("body",)))
        elif k is Hope:
            out = Hope(phi.agent, self.t(phi.body, pos + ("body",)))
        elif k is PubUpdate:
            out = self.reduce(phi, self._public(phi), pos)
        elif k is DynUpdate:
            out = self.reduce(phi, self._private(phi), pos)
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self.memo[phi] = out
        return out

    def reduce(self, phi, rewritten, pos):
        rule, psi = rewritten
        self.trace.record(rule, pos, complexity(phi), complexity(psi))
        return self.t(psi, pos)

    def compose(self, U, V):
        key = (U, V)
        W = self.composed.get(key)
        if W is None:
            W = self.composed[key] = update.compose(U, V)
        return W

    def _public(self, phi):
        vec, body = phi.vector, phi.body
        k = type(body)
        if k is Atom or k is Top:
            return "pub-atom", body
        if k is Neg:
            return "pub-neg", Neg(PubUpdate(vec, body.body))
        if k is Conj:
            return "pub-conj", Conj(PubUpdate(vec, body.left), PubUpdate(vec, body.right))
        if k is Know:
            return "pub-know", Know(body.agent, PubUpdate(vec, body.body))
        if k is Hope:
            chi = vec[self.position(body.agent, vec)]
            return "pub-hope", implies(chi, Know(body.agent, implies(chi, PubUpdate(vec, body.body))))
        if k is PubUpdate:
            return "pub-pub", PubUpdate(tuple(PubUpdate(vec, g) for g in body.vector), body.body)
        if k is DynUpdate:
            # the public update becomes a singleton update model composed in front
            V = body.model
            pub = update.embed_public(V.agents, vec).model
            W = self.compose(pub, V)
            return "pub-dyn", DynUpdate(W, update.pair_name("e", body.action), body.body)
        raise TypeError(f"not a formula: {body!r}")

    def _private(self, phi):
        U, e, body = phi.model, phi.action, phi.body
        k = type(body)
        if k is Atom:
            return "dyn-atom", U.substitution(e, body.name)
        if k is Top:
            return "dyn-atom", body
        if k is Neg:
            return "dyn-neg", Neg(DynUpdate(U, e, body.body))
        if k is Conj:
            return "dyn-conj", Conj(DynUpdate(U, e, body.left), DynUpdate(U, e, body.right))
        if k is Know:
            i = body.agent
            return "dyn-know", big_and(Know(i, DynUpdate(U, f, body.body)) for f in U.k_class(e, i))
        if k is Hope:
            i = body.agent
            parts = [
                Know(i, implies(U.hope_formula(f, i), DynUpdate(U, f, body.body))) for f in U.k_class(e, i)
            ]
            return "dyn-hope", implies(U.hope_formula(e, i), big_and(parts))
        if k is DynUpdate:
            W = self.compose(U, body.model)
            return "dyn-dyn", DynUpdate(W, update.pair_name(e, body.action), body.body)
        if k is PubUpdate:
            pub = update.embed_public(U.agents, body.vector).model
            W = self.compose(U, pub)
            return "dyn-pub", DynUpdate(W, update.pair_name(e, "e"), body.body)
        raise TypeError(f"not a formula: {body!r}")


def _infer_agents(phi):
    for f in subformulas(phi):
        if type(f) is DynUpdate:
            return f.model.agents
    names = tuple(sorted(agents_of(phi)))
    sizes = {len(f.vector) for f in subformulas(phi) if type(f) is PubUpdate}
    if sizes and sizes != {len(names)}:
        raise ValueError("cannot infer the agent order of the public updates; pass agents explicitly")
    return names


# ---------------------------------------------------------------------------
# semantic check of the reduction equivalences


@dataclass(frozen=True)
class Discrepancy:
    schema: str
    left: Formula
    right: Formula
    world: str


@dataclass
class ReductionReport:
    checked: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def __str__(self):
        lines = [f"{s:<18} {n} instances" for s, n in self.checked.items()]
        for d in self.discrepancies:
            lines.append(f"MISMATCH {d.schema} at {d.world}: {d.left}  vs  {d.right}")
        return "\n".join(lines)


def check_reduction_axioms(model, samples: int = 20, seed: int = 0, schemas=None, depth: int = 2) -> ReductionReport:
    """Evaluate both sides of random reduction-equivalence instances on ``model``.

    ``samples`` instances are drawn per schema; every world is checked and
    each disagreement is listed with its world.
    """
    from . import axioms
    from .checker import truth_mask

    rng = random.Random(seed)
    props = model.props or ("p",)
    report = ReductionReport()
    for schema in schemas or axioms.REDUCTION_SCHEMAS:
        for _ in range(samples):
            inst = axioms.reduction_instance(schema, rng, model.agents, props, depth)
            left = truth_mask(model, inst.left, {})
            right = truth_mask(model, inst.right, {})
            for k in bits(left ^ right):
                report.discrepancies.append(Discrepancy(schema, inst.left, inst.right, model.worlds[k]))
            model.clear_cache()
        report.checked[schema] = samples
    return report

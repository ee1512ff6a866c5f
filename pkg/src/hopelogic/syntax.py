"""Concrete text syntax for formulas.

Grammar, loosest binding first::

    formula  := imp ('<->' formula)?
    imp      := or ('->' imp)?                 right associative
    or       := and ('|' and)*                 left associative
    and      := unary ('&' unary)*             left associative
    unary    := '~' unary | OP '{' agent '}' unary | update unary | primary
    OP       := K | Kh | H | Hh | B
    update   := '[' formula (',' formula)* ']' ('{' agent (',' agent)* '}')?
              | '[' model ':' action ']'
    primary  := 'true' | 'false' | atom | '(' formula ')'

``[f1, ..., fn] phi`` is a public update and needs exactly one formula per
agent; ``[f]{a,b} phi`` updates agents ``a`` and ``b`` with ``f`` and
everyone else trivially. ``[U:e] phi`` refers to a registered update model.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import (
    BOT, TOP, Atom, Conj, DynUpdate, Formula, Hope, Know, Neg, PubUpdate, Top,
    belief, dual_hope, dual_know, iff, implies, lor, upd_group,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line, self.column = line, col


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<dyn>\[\s*(?P<model>[A-Za-z_][\w;'.()]*)\s*:\s*(?P<action>[^\]]*?)\s*\])
  | (?P<modal>(?:Kh|Hh|K|H|B)\{)
  | (?P<op><->|->|[~&|()\[\],{}])
  | (?P<ident>[A-Za-z_][\w']*|\d+)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int
    extra: tuple = ()


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind == "ws":
            pass
        elif m.group("dyn"):
            out.append(_Tok("dyn", m.group("dyn"), pos, (m.group("model"), m.group("action"))))
        elif kind == "modal":
            out.append(_Tok("modal", m.group("modal")[:-1], pos))
        elif kind == "op":
            out.append(_Tok(m.group("op"), m.group("op"), pos))
        else:
            out.append(_Tok("ident", m.group("ident"), pos))
        pos = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, agents, props, updates):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.agents = tuple(agents)
        self.props = None if props is None else set(props)
        self.updates = updates or {}

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        t = self.toks[self.k]
        if kind is not None and t.kind != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if t.kind == "eof" else repr(t.value)
            self.fail(f"expected {want}, found {got}", t)
        self.k += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, self.text, tok.pos)

    def agent(self):
        t = self.take("ident")
        if t.value not in self.agents:
            self.fail(f"unknown agent {t.value!r}", t)
        return t.value

    def formula(self):
        left = self.imp()
        if self.peek().kind == "<->":
            self.take()
            return iff(left, self.formula())
        return left

    def imp(self):
        left = self.disj()
        if self.peek().kind == "->":
            self.take()
            return implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek().kind == "|":
            self.take()
            left = lor(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek().kind == "&":
            self.take()
            left = Conj(left, self.unary())
        return left

    def unary(self):
        t = self.peek()
        if t.kind == "~":
            self.take()
            return Neg(self.unary())
        if t.kind == "modal":
            self.take()
            i = self.agent()
            self.take("}")
            body = self.unary()
            return {
                "K": Know, "H": Hope, "Kh": dual_know, "Hh": dual_hope, "B": belief,
            }[t.value](i, body)
        if t.kind == "dyn":
            self.take()
            name, action = t.extra
            U = self.updates.get(name)
            if U is None:
                self.fail(f"unknown update model {name!r}", t)
            if action not in U.actions:
                self.fail(f"update model {name!r} has no action {action!r}", t)
            return DynUpdate(U, action, self.unary())
        if t.kind == "[":
            return self.public()
        return self.primary()

    def public(self):
        start = self.take("[")
        vec = [self.formula()]
        while self.peek().kind == ",":
            self.take()
            vec.append(self.formula())
        self.take("]")
        if self.peek().kind == "{":
            if len(vec) != 1:
                self.fail("a group update takes exactly one formula", start)
            self.take()
            group = [self.agent()]
            while self.peek().kind == ",":
                self.take()
                group.append(self.agent())
            self.take("}")
            return upd_group(self.agents, group, vec[0], self.unary())
        if len(vec) != len(self.agents):
            self.fail(
                f"public update has {len(vec)} formulas but there are {len(self.agents)} agents", start
            )
        return PubUpdate(tuple(vec), self.unary())

    def primary(self):
        t = self.take()
        if t.kind == "(":
            f = self.formula()
            self.take(")")
            return f
        if t.kind == "ident":
            if t.value == "true":
                return TOP
            if t.value == "false":
                return BOT
            if self.props is not None and t.value not in self.props:
                self.fail(f"unknown proposition {t.value!r}", t)
            return Atom(t.value)
        self.fail("expected a formula" if t.kind != "eof" else "unexpected end of input", t)


def parse(
    text: str,
    agents: Sequence[str],
    props: Sequence[str] | None = None,
    updates: Mapping[str, object] | None = None,
) -> Formula:
    """Parse ``text`` over the given agents.

    ``props`` restricts the allowed atoms (``None`` allows any name);
    ``updates`` maps names to ``HopeUpdateModel`` objects for ``[U:e]``.
    """
    p = _Parser(text, agents, props, updates)
    f = p.formula()
    p.take("eof")
    return f


# ---------------------------------------------------------------------------
# printing

_IFF, _IMP, _OR, _AND, _UNARY = 1, 2, 3, 4, 5


def _match_or(f):
    if type(f) is Neg and type(f.body) is Conj:
        a, b = f.body.left, f.body.right
        if type(a) is Neg and type(b) is Neg:
            return a.body, b.body
    return None


def _match_imp(f):
    if type(f) is Neg and type(f.body) is Conj and type(f.body.right) is Neg:
        return f.body.left, f.body.right.body
    return None


def _match_iff(f):
    if type(f) is Conj:
        l, r = _match_imp(f.left), _match_imp(f.right)
        if l and r and l[0] == r[1] and l[1] == r[0]:
            return l
    return None


def _match_belief(f):
    if type(f) is Know:
        m = _match_imp(f.body)
        if m and m[0] == Neg(Hope(f.agent, BOT)):
            return m[1]
    return None


def _show(f, ctx):
    text, prec = _render(f)
    return f"({text})" if prec < ctx else text


def _render(f):
    t = type(f)
    if t is Top:
        return "true", _UNARY
    if f == BOT:
        return "false", _UNARY
    if t is Atom:
        return f.name, _UNARY
    m = _match_iff(f)
    if m:
        return f"{_show(m[0], _IMP)} <-> {_show(m[1], _IFF)}", _IFF
    m = _match_or(f)
    if m:
        return f"{_show(m[0], _OR)} | {_show(m[1], _AND)}", _OR
    m = _match_imp(f)
    if m:
        return f"{_show(m[0], _OR)} -> {_show(m[1], _IMP)}", _IMP
    if t is Neg:
        b = f.body
        if type(b) is Know and type(b.body) is Neg:
            return f"Kh{{{b.agent}}} {_show(b.body.body, _UNARY)}", _UNARY
        if type(b) is Hope and type(b.body) is Neg and b.body != BOT:
            return f"Hh{{{b.agent}}} {_show(b.body.body, _UNARY)}", _UNARY
        return f"~{_show(b, _UNARY)}", _UNARY
    if t is Conj:
        return f"{_show(f.left, _AND)} & {_show(f.right, _UNARY)}", _AND
    if t is Know:
        m = _match_belief(f)
        if m is not None:
            return f"B{{{f.agent}}} {_show(m, _UNARY)}", _UNARY
        return f"K{{{f.agent}}} {_show(f.body, _UNARY)}", _UNARY
    if t is Hope:
        return f"H{{{f.agent}}} {_show(f.body, _UNARY)}", _UNARY
    if t is PubUpdate:
        vec = ", ".join(_show(g, _IFF) for g in f.vector)
        return f"[{vec}] {_show(f.body, _UNARY)}", _UNARY
    if t is DynUpdate:
        return f"[{f.model.name}:{f.action}] {_show(f.body, _UNARY)}", _UNARY
    raise TypeError(f"not a formula: {f!r}")


def to_text(f: Formula) -> str:
    """Render ``f``; ``parse(to_text(f))`` gives back ``f`` exactly."""
    return _render(f)[0]

"""Formula syntax trees for the logic of knowledge and hope with dynamic updates.

The core constructors are ``Atom``, ``Top``, ``Neg``, ``Conj``, ``Know``,
``Hope``, ``PubUpdate`` and ``DynUpdate``. Everything else (falsum,
disjunction, belief, the byzantine threshold formulas, ...) is a function
returning a core tree, so every consumer only has to handle eight cases.

Agents are referred to by name. A public update carries one hope update
formula per agent, in the order of the agent tuple of whatever model it is
evaluated on.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

if TYPE_CHECKING:
    from .update import HopeUpdateModel

MAX_EXPANSION_AGENTS = 8


def _cache_hash(cls):
    # frozen dataclasses rehash the whole tree on every dict lookup
    generated = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = generated(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __invert__(self):
        return Neg(self)

    def __and__(self, other):
        return Conj(self, other)

    def __or__(self, other):
        return lor(self, other)

    def __rshift__(self, other):
        return implies(self, other)

    def __str__(self):
        from .syntax import to_text

        return to_text(self)


@_cache_hash
@dataclass(frozen=True)
class Atom(Formula):
    name: str


@_cache_hash
@dataclass(frozen=True)
class Top(Formula):
    pass


@_cache_hash
@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


@_cache_hash
@dataclass(frozen=True)
class Conj(Formula):
    left: Formula
    right: Formula


@_cache_hash
@dataclass(frozen=True)
class Know(Formula):
    agent: str
    body: Formula


@_cache_hash
@dataclass(frozen=True)
class Hope(Formula):
    agent: str
    body: Formula


@_cache_hash
@dataclass(frozen=True)
class PubUpdate(Formula):
    """``[phi_1, ..., phi_n] body``: simultaneous public hope update."""

    vector: tuple
    body: Formula

    def __post_init__(self):
        if not isinstance(self.vector, tuple):
            object.__setattr__(self, "vector", tuple(self.vector))
        if not self.vector:
            raise ValueError("public update needs at least one hope update formula")


@_cache_hash
@dataclass(frozen=True)
class DynUpdate(Formula):
    """``[U, e] body`` for a pointed hope update model (with optional factual change)."""

    model: "HopeUpdateModel"
    action: str
    body: Formula

    def __post_init__(self):
        if self.action not in self.model.actions:
            raise ValueError(
                f"action {self.action!r} is not an action of update model {self.model.name!r}"
            )


TOP = Top()
BOT = Neg(TOP)

# ---------------------------------------------------------------------------
# derived connectives


def atom(name: str) -> Atom:
    return Atom(name)


def bot() -> Formula:
    return BOT


def lor(a: Formula, b: Formula) -> Formula:
    return Neg(Conj(Neg(a), Neg(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Neg(Conj(a, Neg(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return Conj(implies(a, b), implies(b, a))


def dual_know(agent: str, body: Formula) -> Formula:
    return Neg(Know(agent, Neg(body)))


def dual_hope(agent: str, body: Formula) -> Formula:
    return Neg(Hope(agent, Neg(body)))


def faulty(agent: str) -> Formula:
    return Hope(agent, BOT)


def correct(agent: str) -> Formula:
    """``~H_i false``: agent ``i`` is correct at the current world."""
    return Neg(Hope(agent, BOT))


def belief(agent: str, body: Formula) -> Formula:
    """Knowledge conditioned on one's own correctness."""
    return Know(agent, implies(correct(agent), body))


def big_and(parts: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Conj(p, out)
    return out


def big_or(parts: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; the empty disjunction is ``false``."""
    parts = list(parts)
    if not parts:
        return BOT
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = lor(p, out)
    return out


def mutual_know(group: Iterable[str], body: Formula) -> Formula:
    return big_and(Know(i, body) for i in group)


def _check_threshold(agents: Sequence[str], k: int, what: str):
    if len(agents) > MAX_EXPANSION_AGENTS:
        raise ValueError(
            f"{what}: {len(agents)} agents exceeds the expansion bound {MAX_EXPANSION_AGENTS}"
        )
    if not 0 <= k <= len(agents):
        raise ValueError(f"{what}: group size {k} out of range for {len(agents)} agents")


def at_least(agents: Sequence[str], k: int, per_agent) -> Formula:
    """Disjunction over all ``k``-subsets ``G`` of the conjunction of ``per_agent(i)``.

    The result has ``binomial(n, k)`` disjuncts.
    """
    _check_threshold(agents, k, "at_least")
    return big_or(big_and(per_agent(i) for i in group) for group in combinations(agents, k))


def byz(agents: Sequence[str], f: int) -> Formula:
    """At most ``f`` of the agents are faulty."""
    _check_threshold(agents, f, "byz")
    return at_least(agents, len(agents) - f, correct)


def b_at_least(agents: Sequence[str], f: int, body: Formula) -> Formula:
    """At least ``f`` agents believe ``body``."""
    _check_threshold(agents, f, "b_at_least")
    return at_least(agents, f, lambda i: belief(i, body))


def threshold(agents: Sequence[str], vector: Sequence[Formula], k: int) -> Formula:
    """At least ``k`` of the hope update formulas in ``vector`` hold."""
    if len(vector) != len(agents):
        raise ValueError("vector length must equal the number of agents")
    by_agent = dict(zip(agents, vector))
    return at_least(agents, k, by_agent.__getitem__)


def trivial_vector(agents: Sequence[str]) -> tuple:
    """The update vector that changes nobody's hope relation."""
    return tuple(correct(i) for i in agents)


def upd_group(agents: Sequence[str], group: Iterable[str], phi: Formula, body: Formula) -> PubUpdate:
    """``[phi]_G body``: agents in ``G`` update with ``phi``, the rest trivially."""
    group = set(group)
    unknown = group - set(agents)
    if unknown:
        raise ValueError(f"unknown agents {sorted(unknown)}")
    return PubUpdate(tuple(phi if i in group else correct(i) for i in agents), body)


def upd_single(agents: Sequence[str], agent: str, phi: Formula, body: Formula) -> PubUpdate:
    return upd_group(agents, [agent], phi, body)


def expand_derived(kind: str, agents: Sequence[str], *args) -> Formula:
    """Expand a named derived form into a core formula.

    ``kind`` is one of ``byz`` (f), ``b_at_least`` (f, psi),
    ``threshold`` (vector, k), ``mutual_know`` (group, psi),
    ``belief`` (agent, psi), ``upd_single`` (agent, phi, psi) or
    ``upd_group`` (group, phi, psi).
    """
    table = {
        "byz": lambda f: byz(agents, f),
        "b_at_least": lambda f, psi: b_at_least(agents, f, psi),
        "threshold": lambda vec, k: threshold(agents, vec, k),
        "mutual_know": mutual_know,
        "belief": belief,
        "upd_single": lambda i, phi, psi: upd_single(agents, i, phi, psi),
        "upd_group": lambda g, phi, psi: upd_group(agents, g, phi, psi),
    }
    try:
        build = table[kind]
    except KeyError:
        raise ValueError(f"unknown derived form {kind!r}") from None
    return build(*args)


# ---------------------------------------------------------------------------
# structural helpers


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Atom, Top)):
        return ()
    if isinstance(phi, Conj):
        return (phi.left, phi.right)
    if isinstance(phi, PubUpdate):
        return phi.vector + (phi.body,)
    return (phi.body,)


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order walk. Does not descend into update-model payloads."""
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        stack.extend(reversed(children(f)))


def is_static(phi: Formula) -> bool:
    """True when ``phi`` contains no update operator anywhere."""
    return not any(isinstance(f, (PubUpdate, DynUpdate)) for f in subformulas(phi))


def atoms_of(phi: Formula) -> set:
    out = set()
    for f in subformulas(phi):
        if isinstance(f, Atom):
            out.add(f.name)
        elif isinstance(f, DynUpdate):
            for g in f.model.payload_formulas():
                out |= atoms_of(g)
            for props in f.model.sigma:
                out.update(p for p, _ in props)
    return out


def agents_of(phi: Formula) -> set:
    out = set()
    for f in subformulas(phi):
        if isinstance(f, (Know, Hope)):
            out.add(f.agent)
        elif isinstance(f, DynUpdate):
            out.update(f.model.agents)
            for g in f.model.payload_formulas():
                out |= agents_of(g)
    return out


def depth(phi: Formula) -> int:
    """Modal/connective nesting depth (payload formulas count as children)."""
    if isinstance(phi, DynUpdate):
        inner = [depth(g) for g in phi.model.payload_formulas()]
        return 1 + max(inner + [depth(phi.body)])
    kids = children(phi)
    return 1 + max((depth(k) for k in kids), default=0)


def size(phi: Formula) -> int:
    """Number of nodes, counting the payload of every embedded update model."""
    if isinstance(phi, DynUpdate):
        return 1 + size(phi.body) + sum(size(g) for g in phi.model.payload_formulas())
    return 1 + sum(size(k) for k in children(phi))


# ---------------------------------------------------------------------------
# complexity measure used by the termination argument


@lru_cache(maxsize=1 << 16)
def complexity(phi: Formula) -> int:
    if isinstance(phi, (Atom, Top)):
        return 1
    if isinstance(phi, Neg):
        return complexity(phi.body) + 1
    if isinstance(phi, Conj):
        return max(complexity(phi.left), complexity(phi.right)) + 1
    if isinstance(phi, Know):
        return complexity(phi.body) + 1
    if isinstance(phi, Hope):
        return complexity(phi.body) + 4
    if isinstance(phi, PubUpdate):
        return (vector_complexity(phi.vector) + 1) * complexity(phi.body)
    if isinstance(phi, DynUpdate):
        u = phi.model
        return (model_complexity(u) + len(u.actions)) * complexity(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def vector_complexity(vector: Sequence[Formula]) -> int:
    return max(complexity(f) for f in vector)


def model_complexity(u: "HopeUpdateModel") -> int:
    """Max complexity over every hope update formula and every factual override."""
    return max(complexity(f) for f in u.payload_formulas())

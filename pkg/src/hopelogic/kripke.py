"""Finite Kripke models with knowledge and hope relations (class KH).

A model in KH is determined by, per agent, a partition of the worlds
(the knowledge relation) and the set of worlds where the agent is correct:
the hope relation is the knowledge relation restricted to correct worlds.
``KripkeModel`` stores exactly that normal form, with worlds interned to
bit positions so that truth sets are Python ints.

Arbitrary candidate relations live in ``CandidateModel``; ``validate``
reports every violated KH condition with a witness and ``build_model``
turns a valid candidate into a ``KripkeModel``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class ModelError(ValueError):
    """Raised for malformed input: unknown names, invalid relations."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class KripkeModel:
    """Immutable KH model in (partition, correct-set) normal form.

    ``partitions[i]`` lists the knowledge classes of agent ``i`` and
    ``correct[i]`` the worlds where ``i`` is correct. Any such pair is a
    KH model, so the constructor only checks that the partitions really are
    partitions of ``worlds``.
    """

    __slots__ = (
        "agents", "props", "worlds", "index", "full", "provenance",
        "_val", "_block", "_correct", "_cache", "_key",
    )

    def __init__(
        self,
        agents: Sequence[str],
        props: Sequence[str],
        worlds: Sequence[str],
        valuation: Mapping[str, Iterable[str]],
        partitions: Mapping[str, Iterable[Iterable[str]]],
        correct: Mapping[str, Iterable[str]],
        provenance: Mapping[str, tuple] | None = None,
    ):
        self.agents = tuple(agents)
        self.worlds = tuple(worlds)
        if not self.worlds:
            raise ModelError("a model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("duplicate world names")
        if len(set(self.agents)) != len(self.agents):
            raise ModelError("duplicate agent names")
        self.index = {w: k for k, w in enumerate(self.worlds)}
        self.full = (1 << len(self.worlds)) - 1
        props = list(props)
        extra = [p for p in valuation if p not in props]
        self.props = tuple(props + sorted(extra))
        self._val = {p: self._mask(valuation.get(p, ()), f"valuation of {p}") for p in self.props}

        block = {}
        for i in self.agents:
            if i not in partitions:
                raise ModelError(f"no knowledge partition for agent {i!r}")
            per_world = [0] * len(self.worlds)
            covered = 0
            for cls in partitions[i]:
                m = self._mask(cls, f"K-class of {i}")
                if m == 0:
                    raise ModelError(f"empty K-class for agent {i!r}")
                if m & covered:
                    raise ModelError(f"K-classes of agent {i!r} overlap")
                covered |= m
                for k in bits(m):
                    per_world[k] = m
            if covered != self.full:
                missing = [self.worlds[k] for k in bits(self.full & ~covered)]
                raise ModelError(f"K-classes of agent {i!r} miss worlds {missing}")
            block[i] = tuple(per_world)
        self._block = block
        self._correct = {i: self._mask(correct.get(i, ()), f"correct set of {i}") for i in self.agents}
        self.provenance = dict(provenance) if provenance is not None else None
        self._cache = {}
        self._key = None

    @classmethod
    def _from_masks(cls, agents, props, worlds, val, block, correct, provenance=None):
        # trusted fast path used by the update constructions
        m = cls.__new__(cls)
        m.agents = tuple(agents)
        m.props = tuple(props)
        m.worlds = tuple(worlds)
        m.index = {w: k for k, w in enumerate(m.worlds)}
        m.full = (1 << len(m.worlds)) - 1
        m._val = dict(val)
        m._block = {i: tuple(block[i]) for i in m.agents}
        m._correct = dict(correct)
        m.provenance = provenance
        m._cache = {}
        m._key = None
        return m

    def clear_cache(self):
        """Drop memoised truth sets and updated models."""
        self._cache.clear()

    def _mask(self, names, what) -> int:
        m = 0
        for w in names:
            try:
                m |= 1 << self.index[w]
            except KeyError:
                raise ModelError(f"unknown world {w!r} in {what}") from None
        return m

    def names(self, mask: int) -> frozenset:
        return frozenset(self.worlds[k] for k in bits(mask))

    def mask_of(self, names: Iterable[str]) -> int:
        return self._mask(names, "world set")

    # -- lookups ---------------------------------------------------------

    def _w(self, w: str) -> int:
        try:
            return self.index[w]
        except KeyError:
            raise ModelError(f"unknown world {w!r}") from None

    def _agent(self, i: str):
        if i not in self._block:
            raise ModelError(f"unknown agent {i!r}")
        return i

    def k_class(self, w: str, i: str) -> frozenset:
        return self.names(self._block[self._agent(i)][self._w(w)])

    def h_class(self, w: str, i: str) -> frozenset:
        k = self._w(w)
        c = self._correct[self._agent(i)]
        if not c >> k & 1:
            return frozenset()
        return self.names(self._block[i][k] & c)

    def is_correct(self, w: str, i: str) -> bool:
        return bool(self._correct[self._agent(i)] >> self._w(w) & 1)

    def correct_set(self, i: str) -> frozenset:
        return self.names(self._correct[self._agent(i)])

    def partition(self, i: str) -> list:
        """Knowledge classes of ``i`` ordered by their first world."""
        seen, out = 0, []
        for m in self._block[self._agent(i)]:
            if not m & seen:
                seen |= m
                out.append(self.names(m))
        return out

    def true_props(self, w: str) -> frozenset:
        k = self._w(w)
        return frozenset(p for p in self.props if self._val[p] >> k & 1)

    def valuation(self) -> dict:
        return {p: self.names(self._val[p]) for p in self.props}

    def extension(self, p: str) -> frozenset:
        return self.names(self._val.get(p, 0))

    def knowledge_relation(self, i: str) -> frozenset:
        return frozenset(
            (self.worlds[a], self.worlds[b])
            for a, m in enumerate(self._block[self._agent(i)])
            for b in bits(m)
        )

    def hope_relation(self, i: str) -> frozenset:
        c = self._correct[self._agent(i)]
        return frozenset(
            (self.worlds[a], self.worlds[b])
            for a, m in enumerate(self._block[i])
            if c >> a & 1
            for b in bits(m & c)
        )

    def to_candidate(self) -> "CandidateModel":
        return CandidateModel(
            agents=self.agents,
            props=self.props,
            worlds=self.worlds,
            valuation={p: set(v) for p, v in self.valuation().items()},
            K={i: set(self.knowledge_relation(i)) for i in self.agents},
            H={i: set(self.hope_relation(i)) for i in self.agents},
        )

    # -- equality --------------------------------------------------------

    def structure_key(self):
        """Canonical structural key: equal keys iff equal models up to world order."""
        if self._key is None:
            self._key = (
                self.agents,
                frozenset(self.worlds),
                frozenset((p, self.names(m)) for p, m in self._val.items() if m),
                tuple(frozenset(self.partition(i)) for i in self.agents),
                tuple(self.correct_set(i) for i in self.agents),
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return self.structure_key() == other.structure_key()

    def __hash__(self):
        return hash(self.structure_key())

    def __repr__(self):
        return f"KripkeModel(agents={list(self.agents)}, worlds={list(self.worlds)})"

    def rename(self, mapping: Mapping[str, str]) -> "KripkeModel":
        """Same model with worlds renamed through ``mapping``."""
        new = [mapping[w] for w in self.worlds]
        if len(set(new)) != len(new):
            raise ModelError("renaming is not injective")
        return KripkeModel._from_masks(
            self.agents, self.props, new, self._val, self._block, self._correct
        )


# ---------------------------------------------------------------------------
# candidate models and validation


@dataclass
class CandidateModel:
    """Explicit relations, not yet known to satisfy the KH conditions."""

    agents: Sequence[str]
    props: Sequence[str]
    worlds: Sequence[str]
    valuation: Mapping[str, Iterable[str]]
    K: Mapping[str, Iterable[tuple]]
    H: Mapping[str, Iterable[tuple]]


@dataclass(frozen=True)
class Violation:
    condition: str
    agent: str | None
    witness: tuple

    def __str__(self):
        who = f" agent {self.agent}" if self.agent is not None else ""
        return f"{self.condition}{who}: witness {self.witness}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set:
        return {v.condition for v in self.violations}

    def __bool__(self):
        return bool(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def __str__(self):
        if self.ok:
            return "model is in KH"
        return "\n".join(str(v) for v in self.violations)


def validate(model) -> ValidationReport:
    """Check the KH conditions on a candidate (or an already normalised model).

    Conditions reported: ``worlds-nonempty``, ``unknown-world``,
    ``K-reflexive``, ``K-symmetric``, ``K-transitive``, ``shift-serial``,
    ``HinK``, ``oneH`` and the derived ``H-symmetric`` / ``H-transitive``.
    Each violation carries the first witness found per (condition, agent).
    """
    if isinstance(model, KripkeModel):
        model = model.to_candidate()
    report = ValidationReport()
    add = report.violations.append
    worlds = list(model.worlds)
    wset = set(worlds)
    if not worlds:
        add(Violation("worlds-nonempty", None, ()))
    for p, ext in model.valuation.items():
        for w in ext:
            if w not in wset:
                add(Violation("unknown-world", None, (p, w)))
    for i in model.agents:
        K = set(model.K.get(i, ()))
        H = set(model.H.get(i, ()))
        for rel_name, rel in (("K", K), ("H", H)):
            for pair in sorted(rel):
                if pair[0] not in wset or pair[1] not in wset:
                    add(Violation("unknown-world", i, (rel_name,) + tuple(pair)))
                    break
        Hsucc = {}
        for w, v in H:
            Hsucc.setdefault(w, set()).add(v)
        Ksucc = {}
        for w, v in K:
            Ksucc.setdefault(w, set()).add(v)

        _first(add, "K-reflexive", i, ((w, w) for w in worlds if (w, w) not in K))
        _first(add, "K-symmetric", i, ((w, v) for w, v in sorted(K) if (v, w) not in K))
        _first(add, "K-transitive", i, (
            (w, v, u) for w, v in sorted(K) for u in sorted(Ksucc.get(v, ())) if (w, u) not in K
        ))
        _first(add, "shift-serial", i, ((w, v) for w, v in sorted(H) if not Hsucc.get(v)))
        _first(add, "HinK", i, ((w, v) for w, v in sorted(H) if (w, v) not in K))
        _first(add, "oneH", i, (
            (w, v) for w, v in sorted(K) if Hsucc.get(w) and Hsucc.get(v) and (w, v) not in H
        ))
        _first(add, "H-symmetric", i, ((w, v) for w, v in sorted(H) if (v, w) not in H))
        _first(add, "H-transitive", i, (
            (w, v, u) for w, v in sorted(H) for u in sorted(Hsucc.get(v, ())) if (w, u) not in H
        ))
    return report


def _first(add, condition, agent, witnesses):
    for wit in witnesses:
        add(Violation(condition, agent, tuple(wit)))
        return


def build_model(candidate: CandidateModel) -> KripkeModel:
    """Normalise a valid candidate; raises ``ModelError`` carrying the report otherwise."""
    report = validate(candidate)
    if not report.ok:
        raise ModelError(f"model is not in KH:\n{report}", report)
    partitions, correct = {}, {}
    for i in candidate.agents:
        K = set(candidate.K.get(i, ()))
        seen, classes = set(), []
        for w in candidate.worlds:
            if w not in seen:
                cls = {v for (u, v) in K if u == w}
                seen |= cls
                classes.append(cls)
        partitions[i] = classes
        correct[i] = {w for (w, _) in candidate.H.get(i, ())}
    return KripkeModel(
        candidate.agents, candidate.props, candidate.worlds,
        candidate.valuation, partitions, correct,
    )


def is_correct(model: KripkeModel, w: str, i: str) -> bool:
    return model.is_correct(w, i)


def k_class(model: KripkeModel, w: str, i: str) -> frozenset:
    return model.k_class(w, i)


def h_class(model: KripkeModel, w: str, i: str) -> frozenset:
    return model.h_class(w, i)


def hope_from_correct(model: KripkeModel, i: str) -> frozenset:
    """Rebuild ``H_i`` as ``K_i`` restricted to worlds where ``i`` is correct."""
    c = model.correct_set(i)
    return frozenset((w, v) for (w, v) in model.knowledge_relation(i) if w in c and v in c)

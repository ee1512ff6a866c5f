"""Truth evaluation, validity in a model and bounded countermodel probing.

Evaluation is extension based: ``truth_mask(M, phi)`` returns the set of
worlds satisfying ``phi`` as a bitmask over ``M.worlds``. Update operators
are evaluated by building the updated model (and memoised per model).
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from . import update
from .formula import (
    Atom, Conj, DynUpdate, Formula, Hope, Know, Neg, PubUpdate, Top, agents_of, atoms_of,
)
from .kripke import KripkeModel, ModelError, bits

log = logging.getLogger(__name__)

CACHE_ENABLED = True


class CrossCheckError(AssertionError):
    """Direct evaluation and evaluation of the translation disagree."""


def _distinct_blocks(model: KripkeModel, i: str):
    key = ("blocks", i)
    out = model._cache.get(key)
    if out is None:
        seen, out = 0, []
        for b in model._block[i]:
            if not b & seen:
                seen |= b
                out.append(b)
        model._cache[key] = out
    return out


def truth_mask(model: KripkeModel, phi: Formula, memo: dict | None = None) -> int:
    """Bitmask of the worlds of ``model`` where ``phi`` holds."""
    if memo is None:
        memo = model._cache.setdefault("truth", {}) if CACHE_ENABLED else {}
    return _mask(model, phi, memo)


def _mask(model, phi, memo):
    r = memo.get(phi)
    if r is not None:
        return r
    t = type(phi)
    if t is Atom:
        r = model._val.get(phi.name, 0)
    elif t is Top:
        r = model.full
    elif t is Neg:
        r = model.full & ~_mask(model, phi.body, memo)
    elif t is Conj:
        r = _mask(model, phi.left, memo)
        if r:
            r &= _mask(model, phi.right, memo)
    elif t is Know:
        if phi.agent not in model._block:
            raise ModelError(f"unknown agent {phi.agent!r}")
        s = _mask(model, phi.body, memo)
        r = 0
        for b in _distinct_blocks(model, phi.agent):
            if b & s == b:
                r |= b
    elif t is Hope:
        if phi.agent not in model._block:
            raise ModelError(f"unknown agent {phi.agent!r}")
        s = _mask(model, phi.body, memo)
        c = model._correct[phi.agent]
        r = model.full & ~c
        for b in _distinct_blocks(model, phi.agent):
            bc = b & c
            if bc and bc & s == bc:
                r |= bc
    elif t is PubUpdate:
        key = ("pub", phi.vector)
        updated = model._cache.get(key) if CACHE_ENABLED else None
        if updated is None:
            updated = update.apply_public(model, phi.vector)
            if CACHE_ENABLED:
                model._cache[key] = updated
        r = truth_mask(updated, phi.body, None if memo is model._cache.get("truth") else {})
    elif t is DynUpdate:
        U = phi.model
        prod = update.product(model, U)
        s = truth_mask(prod, phi.body, None if memo is model._cache.get("truth") else {})
        m = len(U.actions)
        k = U.actions.index(phi.action)
        r = 0
        for w in range(len(model.worlds)):
            if s >> (w * m + k) & 1:
                r |= 1 << w
    else:
        raise TypeError(f"not a formula: {phi!r}")
    memo[phi] = r
    return r


def truth_set(model: KripkeModel, phi: Formula) -> frozenset:
    return model.names(truth_mask(model, phi))


def evaluate(model: KripkeModel, world: str, phi: Formula, cross_check: bool = False) -> bool:
    """``M, w |= phi``.

    With ``cross_check`` the formula is also translated to the static
    language and evaluated without any cache; a disagreement raises
    ``CrossCheckError``.
    """
    k = model._w(world)
    direct = bool(truth_mask(model, phi) >> k & 1)
    if cross_check:
        from .translate import translate

        static, _ = translate(phi, model.agents)
        via = bool(_mask(model, static, {}) >> k & 1)
        if via != direct:
            raise CrossCheckError(
                f"direct evaluation gives {direct} but the translation gives {via} at {world!r}"
            )
    return direct


@dataclass(frozen=True)
class Validity:
    valid: bool
    witness: str | None = None

    def __bool__(self):
        return self.valid


def valid_in_model(model: KripkeModel, phi: Formula) -> Validity:
    """Truth at every world; on failure the first failing world is the witness."""
    miss = model.full & ~truth_mask(model, phi)
    if not miss:
        return Validity(True)
    first = next(bits(miss))
    return Validity(False, model.worlds[first])


# ---------------------------------------------------------------------------
# model enumeration and countermodel search


def set_partitions(n: int):
    """All partitions of ``range(n)`` as lists of block bitmasks."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        bit = 1 << (n - 1)
        for k in range(len(part)):
            yield part[:k] + [part[k] | bit] + part[k + 1:]
        yield part + [bit]


def _per_world(blocks, n):
    per = [0] * n
    for b in blocks:
        for k in bits(b):
            per[k] = b
    return per


def count_models(n_worlds: int, n_agents: int, n_props: int) -> int:
    bell = sum(1 for _ in set_partitions(n_worlds))
    return (bell * 2 ** n_worlds) ** n_agents * 2 ** (n_worlds * n_props)


def enumerate_models(agents, props, n_worlds: int):
    """Every KH model over ``n_worlds`` worlds named ``w0, w1, ...``.

    Each agent independently picks a partition and a correct set; the
    valuation ranges over all assignments to ``props``.
    """
    from itertools import product as cartesian

    agents, props = tuple(agents), tuple(props)
    worlds = tuple(f"w{k}" for k in range(n_worlds))
    full = (1 << n_worlds) - 1
    per_agent = [
        (tuple(_per_world(p, n_worlds)), c)
        for p in set_partitions(n_worlds)
        for c in range(full + 1)
    ]
    for choice in cartesian(per_agent, repeat=len(agents)):
        block = {i: ch[0] for i, ch in zip(agents, choice)}
        corr = {i: ch[1] for i, ch in zip(agents, choice)}
        for vals in cartesian(range(full + 1), repeat=len(props)):
            yield KripkeModel._from_masks(agents, props, worlds, dict(zip(props, vals)), block, corr)


def random_model(rng: random.Random, agents, props, n_worlds: int) -> KripkeModel:
    """Random KH model: random partition and correct set per agent, random valuation.

    The correct set is empty with probability 1/8 so that the
    all-faulty case keeps turning up.
    """
    agents, props = tuple(agents), tuple(props)
    worlds = tuple(f"w{k}" for k in range(n_worlds))
    full = (1 << n_worlds) - 1
    block, corr = {}, {}
    for i in agents:
        labels = [rng.randrange(n_worlds) for _ in range(n_worlds)]
        classes = {}
        for k, lab in enumerate(labels):
            classes[lab] = classes.get(lab, 0) | 1 << k
        block[i] = _per_world(classes.values(), n_worlds)
        corr[i] = 0 if rng.random() < 0.125 else rng.randrange(full + 1)
    val = {p: rng.randrange(full + 1) for p in props}
    return KripkeModel._from_masks(agents, props, worlds, val, block, corr)


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int = 4
    max_agents: int = 3
    max_models: int = 20000
    seed: int = 0
    exhaustive_worlds: int = 3

    def __post_init__(self):
        for name in ("max_worlds", "max_agents", "max_models"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class CountermodelResult:
    model: KripkeModel | None
    world: str | None
    examined: int
    exhaustive_up_to: int

    @property
    def found(self) -> bool:
        return self.model is not None


def find_countermodel(phi: Formula, agents=None, props=None, bounds: SearchBounds = SearchBounds()) -> CountermodelResult:
    """Look for a KH model and world falsifying ``phi``.

    First every model with up to ``bounds.exhaustive_worlds`` worlds is
    enumerated (stopping at the first size whose enumeration would exceed
    the model budget), then random models with up to ``bounds.max_worlds``
    worlds are sampled until ``bounds.max_models`` models were examined.
    Finding nothing proves nothing.
    """
    if agents is None:
        agents = sorted(agents_of(phi))
        if not agents:
            agents = ["a"]
    agents = tuple(agents)
    if len(agents) > bounds.max_agents:
        raise ValueError(f"formula needs {len(agents)} agents, bound is {bounds.max_agents}")
    if props is None:
        props = sorted(atoms_of(phi))
    props = tuple(props)

    examined = 0
    exhaustive = 0

    def falsified(m):
        miss = m.full & ~truth_mask(m, phi, {})
        return m.worlds[next(bits(miss))] if miss else None

    for n in range(1, min(bounds.exhaustive_worlds, bounds.max_worlds) + 1):
        if examined + count_models(n, len(agents), len(props)) > bounds.max_models:
            break
        for m in enumerate_models(agents, props, n):
            examined += 1
            w = falsified(m)
            if w is not None:
                return CountermodelResult(m, w, examined, exhaustive)
        exhaustive = n
    rng = random.Random(bounds.seed)
    while examined < bounds.max_models:
        m = random_model(rng, agents, props, rng.randint(1, bounds.max_worlds))
        examined += 1
        w = falsified(m)
        if w is not None:
            return CountermodelResult(m, w, examined, exhaustive)
    log.debug("no countermodel in %d models", examined)
    return CountermodelResult(None, None, examined, exhaustive)

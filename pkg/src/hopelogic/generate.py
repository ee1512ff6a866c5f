"""Seeded random generation of formulas, update vectors and update models."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

from .formula import TOP, Atom, Conj, DynUpdate, Formula, Hope, Know, Neg, PubUpdate
from .update import HopeUpdateModel


@dataclass(frozen=True)
class FormulaConfig:
    """Knobs for ``random_formula``.

    ``update_prob`` is the chance that a non-leaf node is an update
    operator; ``payload_depth`` bounds the hope update formulas and factual
    substitutions inside generated updates (kept static so that nested
    translations stay small).
    """

    depth: int = 3
    public: bool = True
    private: bool = True
    factual: bool = True
    update_prob: float = 0.3
    max_actions: int = 3
    payload_depth: int = 1
    top_prob: float = 0.05


def random_partition(rng: random.Random, items: Sequence[str]) -> list:
    labels = {}
    for x in items:
        labels.setdefault(rng.randrange(len(items)), []).append(x)
    return [tuple(b) for _, b in sorted(labels.items())]


def random_static(rng: random.Random, agents, props, depth: int, top_prob: float = 0.05) -> Formula:
    return random_formula(rng, agents, props, FormulaConfig(depth=depth, public=False, private=False,
                                                             factual=False, top_prob=top_prob))


def random_vector(rng: random.Random, agents, props, depth: int = 1) -> tuple:
    return tuple(random_static(rng, agents, props, depth) for _ in agents)


def random_update_model(
    rng: random.Random,
    agents,
    props,
    n_actions: int | None = None,
    factual: bool = False,
    payload_depth: int = 1,
    max_actions: int = 3,
    name: str | None = None,
) -> HopeUpdateModel:
    """Random hope update model; with ``factual`` some atoms get substituted."""
    agents, props = tuple(agents), tuple(props)
    if n_actions is None:
        n_actions = rng.randint(1, max_actions)
    actions = [f"e{k}" for k in range(n_actions)]
    theta = {e: [random_static(rng, agents, props, payload_depth) for _ in agents] for e in actions}
    sigma = None
    if factual and props:
        sigma = {}
        for e in actions:
            over = {p: random_static(rng, agents, props, payload_depth) for p in props if rng.random() < 0.5}
            sigma[e] = over
        # make sure at least one atom really changes somewhere
        if not any(f != Atom(q) for over in sigma.values() for q, f in over.items()):
            p = rng.choice(props)
            sigma[rng.choice(actions)][p] = Neg(Atom(p))
    KU = {i: random_partition(rng, actions) for i in agents}
    if name is None:
        name = f"U{rng.randrange(10 ** 6)}"
    return HopeUpdateModel.create(name, agents, actions, theta, KU, sigma)


def random_formula(rng: random.Random, agents, props, cfg: FormulaConfig = FormulaConfig()) -> Formula:
    agents, props = tuple(agents), tuple(props)
    kinds = ["pub"] * cfg.public + ["dyn"] * (cfg.private or cfg.factual)

    def leaf():
        if not props or rng.random() < cfg.top_prob:
            return TOP
        return Atom(rng.choice(props))

    def go(d):
        if d <= 0:
            return leaf()
        if kinds and rng.random() < cfg.update_prob:
            kind = rng.choice(kinds)
            if kind == "pub":
                return PubUpdate(random_vector(rng, agents, props, cfg.payload_depth), go(d - 1))
            factual = cfg.factual and (not cfg.private or rng.random() < 0.5)
            U = random_update_model(rng, agents, props, factual=factual,
                                    payload_depth=cfg.payload_depth, max_actions=cfg.max_actions)
            return DynUpdate(U, rng.choice(U.actions), go(d - 1))
        r = rng.random()
        if r < 0.15:
            return leaf()
        if r < 0.35:
            return Neg(go(d - 1))
        if r < 0.6:
            return Conj(go(d - 1), go(d - 1))
        if r < 0.8:
            return Know(rng.choice(agents), go(d - 1))
        return Hope(rng.choice(agents), go(d - 1))

    return go(cfg.depth)


def random_dynamic_formula(rng: random.Random, agents, props, cfg: FormulaConfig = FormulaConfig()) -> Formula:
    """Like ``random_formula`` but with at least one update operator at the top."""
    body = random_formula(rng, agents, props, replace(cfg, depth=max(cfg.depth - 1, 0)))
    kinds = ["pub"] * cfg.public + ["dyn"] * (cfg.private or cfg.factual)
    if not kinds:
        raise ValueError("no update operators enabled")
    if rng.choice(kinds) == "pub":
        return PubUpdate(random_vector(rng, agents, props, cfg.payload_depth), body)
    factual = cfg.factual and (not cfg.private or rng.random() < 0.5)
    U = random_update_model(rng, agents, props, factual=factual,
                            payload_depth=cfg.payload_depth, max_actions=cfg.max_actions)
    return DynUpdate(U, rng.choice(U.actions), body)

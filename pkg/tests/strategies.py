"""Hypothesis strategies for KH models, formulas and update models."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from hopelogic.formula import TOP, Atom, Conj, Hope, Know, Neg, PubUpdate
from hopelogic.generate import FormulaConfig, random_formula, random_update_model
from hopelogic.kripke import KripkeModel

AGENT_SETS = (("a",), ("a", "b"), ("a", "b", "c"))
PROPS = ("p", "q")


@st.composite
def partitions(draw, worlds):
    labels = draw(st.lists(st.integers(0, len(worlds) - 1), min_size=len(worlds), max_size=len(worlds)))
    blocks = {}
    for w, lab in zip(worlds, labels):
        blocks.setdefault(lab, []).append(w)
    return list(blocks.values())


@st.composite
def kh_models(draw, agents=None, props=PROPS, max_worlds=4):
    if agents is None:
        agents = draw(st.sampled_from(AGENT_SETS))
    n = draw(st.integers(1, max_worlds))
    worlds = [f"w{k}" for k in range(n)]
    subsets = st.sets(st.sampled_from(worlds))
    return KripkeModel(
        agents,
        props,
        worlds,
        {p: draw(subsets) for p in props},
        {i: draw(partitions(worlds)) for i in agents},
        {i: draw(subsets) for i in agents},
    )


def static_formulas(agents, props=PROPS, max_depth=3):
    leaves = st.sampled_from([TOP] + [Atom(p) for p in props])
    ag = st.sampled_from(list(agents))

    def extend(inner):
        return st.one_of(
            inner.map(Neg),
            st.builds(Conj, inner, inner),
            st.builds(Know, ag, inner),
            st.builds(Hope, ag, inner),
        )

    return st.recursive(leaves, extend, max_leaves=2 ** max_depth)


def public_formulas(agents, props=PROPS):
    """Static formulas with public updates sprinkled in (no update models)."""
    vec = st.tuples(*[static_formulas(agents, props, 2) for _ in agents])
    base = static_formulas(agents, props, 2)
    return st.recursive(base, lambda inner: st.one_of(
        st.builds(PubUpdate, vec, inner), inner.map(Neg), st.builds(Conj, inner, inner),
        st.builds(Know, st.sampled_from(list(agents)), inner),
    ), max_leaves=6)


# Update models and dynamic formulas come from the seeded generators; the
# seed is what hypothesis shrinks.
seeds = st.integers(0, 2 ** 32 - 1)


def update_models(agents, props=PROPS, factual=None):
    @st.composite
    def build(draw):
        rng = random.Random(draw(seeds))
        fac = draw(st.booleans()) if factual is None else factual
        return random_update_model(rng, agents, props, factual=fac)
    return build()


def dynamic_formulas(agents, props=PROPS, depth=3):
    cfg = FormulaConfig(depth=depth, update_prob=0.5)
    return seeds.map(lambda s: random_formula(random.Random(s), agents, props, cfg))

"""Instances of the static KH axioms and of the reduction equivalences.

Static axioms (should be valid on every KH model):

    P      propositional tautologies
    K      K_i(phi -> psi) & K_i phi -> K_i psi
    T      K_i phi -> phi
    4      K_i phi -> K_i K_i phi
    5      ~K_i phi -> K_i ~K_i phi
    Hdag   H_i ~H_i false
    KH     H_i phi <-> (~H_i false -> K_i(~H_i false -> phi))

Reduction equivalences come in three families of six schemas: ``public``
(vector updates), ``private`` (update models, no factual change) and
``factual`` (update models with substitutions). Each schema yields pairs
``(left, right)`` whose two sides must agree at every world of every model.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import generate, update
from .formula import (
    BOT, Atom, Conj, DynUpdate, Formula, Hope, Know, Neg, PubUpdate, big_and, correct, iff, implies, lor,
)

STATIC_AXIOMS = ("P", "K", "T", "4", "5", "Hdag", "KH")
REDUCTION_RULES = ("atom", "neg", "conj", "know", "hope", "compose")
FAMILIES = ("public", "private", "factual")
REDUCTION_SCHEMAS = tuple(f"{fam}-{rule}" for fam in FAMILIES for rule in REDUCTION_RULES)


def _static(rng, agents, props, depth):
    return generate.random_static(rng, agents, props, rng.randint(0, depth))


def static_axiom(name: str, rng: random.Random, agents, props, depth: int = 2) -> Formula:
    """One random instance of a static KH axiom."""
    phi = _static(rng, agents, props, depth)
    psi = _static(rng, agents, props, depth)
    i = rng.choice(tuple(agents))
    if name == "P":
        shapes = [
            lambda: lor(phi, Neg(phi)),
            lambda: implies(phi, implies(psi, phi)),
            lambda: iff(Neg(Neg(phi)), phi),
            lambda: implies(Conj(phi, psi), lor(psi, BOT)),
        ]
        return rng.choice(shapes)()
    if name == "K":
        return implies(Conj(Know(i, implies(phi, psi)), Know(i, phi)), Know(i, psi))
    if name == "T":
        return implies(Know(i, phi), phi)
    if name == "4":
        return implies(Know(i, phi), Know(i, Know(i, phi)))
    if name == "5":
        return implies(Neg(Know(i, phi)), Know(i, Neg(Know(i, phi))))
    if name == "Hdag":
        return Hope(i, correct(i))
    if name == "KH":
        return iff(Hope(i, phi), implies(correct(i), Know(i, implies(correct(i), phi))))
    raise ValueError(f"unknown axiom {name!r}")


def random_static_axiom(rng: random.Random, agents, props, depth: int = 2) -> tuple:
    name = rng.choice(STATIC_AXIOMS)
    return name, static_axiom(name, rng, agents, props, depth)


@dataclass(frozen=True)
class ReductionInstance:
    schema: str
    left: Formula
    right: Formula

    @property
    def equivalence(self) -> Formula:
        return iff(self.left, self.right)


def reduction_instance(schema: str, rng: random.Random, agents, props, depth: int = 2) -> ReductionInstance:
    """A random instance of one reduction schema (see ``REDUCTION_SCHEMAS``)."""
    try:
        family, rule = schema.split("-", 1)
    except ValueError:
        raise ValueError(f"unknown schema {schema!r}") from None
    if family not in FAMILIES or rule not in REDUCTION_RULES:
        raise ValueError(f"unknown schema {schema!r}")
    agents, props = tuple(agents), tuple(props)
    psi = _static(rng, agents, props, depth)
    xi = _static(rng, agents, props, depth)
    i = rng.choice(agents)

    if family == "public":
        vec = generate.random_vector(rng, agents, props, 1)

        def box(body):
            return PubUpdate(vec, body)

        if rule == "atom":
            p = Atom(rng.choice(props))
            return ReductionInstance(schema, box(p), p)
        if rule == "neg":
            return ReductionInstance(schema, box(Neg(psi)), Neg(box(psi)))
        if rule == "conj":
            return ReductionInstance(schema, box(Conj(psi, xi)), Conj(box(psi), box(xi)))
        if rule == "know":
            return ReductionInstance(schema, box(Know(i, psi)), Know(i, box(psi)))
        if rule == "hope":
            chi = vec[agents.index(i)]
            return ReductionInstance(schema, box(Hope(i, psi)), implies(chi, Know(i, implies(chi, box(psi)))))
        inner = generate.random_vector(rng, agents, props, 1)
        return ReductionInstance(
            schema, box(PubUpdate(inner, psi)), PubUpdate(tuple(box(g) for g in inner), psi)
        )

    factual = family == "factual"
    U = generate.random_update_model(rng, agents, props, factual=factual, name="U")
    e = rng.choice(U.actions)

    def at(f, body):
        return DynUpdate(U, f, body)

    if rule == "atom":
        changed = sorted(U.changed_props())
        if factual and changed and rng.random() < 0.7:
            e = rng.choice([a for a in U.actions if U.overrides(a)] or list(U.actions))
            p = rng.choice(sorted(U.overrides(e)) or list(props))
        else:
            p = rng.choice(props)
        return ReductionInstance(schema, at(e, Atom(p)), U.substitution(e, p))
    if rule == "neg":
        return ReductionInstance(schema, at(e, Neg(psi)), Neg(at(e, psi)))
    if rule == "conj":
        return ReductionInstance(schema, at(e, Conj(psi, xi)), Conj(at(e, psi), at(e, xi)))
    if rule == "know":
        right = big_and(Know(i, at(f, psi)) for f in U.k_class(e, i))
        return ReductionInstance(schema, at(e, Know(i, psi)), right)
    if rule == "hope":
        right = implies(
            U.hope_formula(e, i),
            big_and(Know(i, implies(U.hope_formula(f, i), at(f, psi))) for f in U.k_class(e, i)),
        )
        return ReductionInstance(schema, at(e, Hope(i, psi)), right)
    V = generate.random_update_model(rng, agents, props, factual=factual, name="V")
    f = rng.choice(V.actions)
    W = update.compose(U, V)
    return ReductionInstance(
        schema, at(e, DynUpdate(V, f, psi)), DynUpdate(W, update.pair_name(e, f), psi)
    )

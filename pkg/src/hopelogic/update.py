"""Model updates: public hope update, hope update models and their composition.

All hope update formulas and factual-change formulas are evaluated in the
*source* model, never in the product being built.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import checker
from .formula import Atom, DynUpdate, Formula, _cache_hash, correct
from .kripke import KripkeModel, ModelError, bits


def pair_name(e: str, f: str) -> str:
    """Action name of ``(e, f)`` in a composed update model."""
    return f"({e},{f})"


def product_world(w: str, e: str) -> str:
    return f"{w}::{e}"


@_cache_hash
@dataclass(frozen=True)
class HopeUpdateModel:
    """Actions, per-agent hope update formulas, factual change and action partitions.

    ``theta[k][j]`` is the hope update formula of agent ``agents[j]`` for
    action ``actions[k]``. ``sigma[k]`` holds only the overridden atoms of
    action ``actions[k]`` as sorted ``(prop, formula)`` pairs; every other
    atom is left unchanged. ``classes[j]`` partitions the actions for agent
    ``agents[j]``.
    """

    name: str
    agents: tuple
    actions: tuple
    theta: tuple
    sigma: tuple
    classes: tuple

    def __post_init__(self):
        if not self.actions:
            raise ModelError(f"update model {self.name!r} has no actions")
        if len(set(self.actions)) != len(self.actions):
            raise ModelError(f"update model {self.name!r} has duplicate actions")
        n, m = len(self.agents), len(self.actions)
        if len(self.theta) != m or any(len(row) != n for row in self.theta):
            raise ModelError(f"update model {self.name!r}: theta must give one formula per agent and action")
        if len(self.sigma) != m:
            raise ModelError(f"update model {self.name!r}: sigma must have one entry per action")
        if len(self.classes) != n:
            raise ModelError(f"update model {self.name!r}: need one action partition per agent")
        for agent, blocks in zip(self.agents, self.classes):
            flat = [e for b in blocks for e in b]
            if sorted(flat) != sorted(self.actions) or any(not b for b in blocks):
                raise ModelError(
                    f"update model {self.name!r}: classes of agent {agent!r} are not a partition of the actions"
                )

    @classmethod
    def create(
        cls,
        name: str,
        agents: Sequence[str],
        actions: Sequence[str],
        theta: Mapping[str, Mapping[str, Formula] | Sequence[Formula]],
        KU: Mapping[str, object],
        sigma: Mapping[str, Mapping[str, Formula]] | None = None,
    ) -> "HopeUpdateModel":
        """Friendly constructor.

        ``KU[agent]`` is a list of action classes, or one of the strings
        ``"identity"`` / ``"universal"``. ``sigma[action][prop]`` gives the
        factual change; overrides equal to the atom itself are dropped.
        """
        agents, actions = tuple(agents), tuple(actions)
        rows = []
        for e in actions:
            if e not in theta:
                raise ModelError(f"update model {name!r}: no hope update formulas for action {e!r}")
            row = theta[e]
            if isinstance(row, Mapping):
                missing = [i for i in agents if i not in row]
                if missing:
                    raise ModelError(f"update model {name!r}: action {e!r} lacks formulas for {missing}")
                row = [row[i] for i in agents]
            rows.append(tuple(row))
        sig = []
        sigma = sigma or {}
        unknown = set(sigma) - set(actions)
        if unknown:
            raise ModelError(f"update model {name!r}: sigma mentions unknown actions {sorted(unknown)}")
        for e in actions:
            over = sigma.get(e, {})
            sig.append(tuple(sorted((p, f) for p, f in over.items() if f != Atom(p))))
        classes = []
        for i in agents:
            spec = KU.get(i)
            if spec is None:
                raise ModelError(f"update model {name!r}: no action partition for agent {i!r}")
            if spec == "identity":
                blocks = tuple((e,) for e in actions)
            elif spec == "universal":
                blocks = (actions,)
            else:
                order = {e: k for k, e in enumerate(actions)}
                try:
                    blocks = tuple(tuple(sorted(b, key=order.__getitem__)) for b in spec)
                except KeyError as exc:
                    raise ModelError(f"update model {name!r}: unknown action {exc.args[0]!r}") from None
            classes.append(blocks)
        return cls(name, agents, actions, tuple(rows), tuple(sig), tuple(classes))

    # -- accessors -----------------------------------------------------------

    def _a(self, e):
        try:
            return self.actions.index(e)
        except ValueError:
            raise ModelError(f"unknown action {e!r} in update model {self.name!r}") from None

    def _i(self, i):
        try:
            return self.agents.index(i)
        except ValueError:
            raise ModelError(f"unknown agent {i!r} in update model {self.name!r}") from None

    def hope_formula(self, e: str, i: str) -> Formula:
        return self.theta[self._a(e)][self._i(i)]

    def overrides(self, e: str) -> dict:
        return dict(self.sigma[self._a(e)])

    def substitution(self, e: str, p: str) -> Formula:
        return self.overrides(e).get(p, Atom(p))

    def k_class(self, e: str, i: str) -> tuple:
        """Actions ``f`` with ``e K^U_i f``, in stored action order."""
        for block in self.classes[self._i(i)]:
            if e in block:
                return block
        raise ModelError(f"unknown action {e!r} in update model {self.name!r}")

    def related(self, e: str, f: str, i: str) -> bool:
        return f in self.k_class(e, i)

    def payload_formulas(self):
        for row in self.theta:
            yield from row
        for over in self.sigma:
            for _, f in over:
                yield f

    def changed_props(self) -> set:
        return {p for over in self.sigma for p, _ in over}

    @property
    def is_factual(self) -> bool:
        return any(self.sigma)

    def renamed(self, name: str) -> "HopeUpdateModel":
        return HopeUpdateModel(name, self.agents, self.actions, self.theta, self.sigma, self.classes)

    def __repr__(self):
        return f"HopeUpdateModel({self.name!r}, actions={list(self.actions)})"


@dataclass(frozen=True)
class PointedUpdateModel:
    model: HopeUpdateModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.actions:
            raise ModelError(f"point {self.point!r} is not an action of {self.model.name!r}")

    def apply(self, body: Formula) -> DynUpdate:
        return DynUpdate(self.model, self.point, body)


# ---------------------------------------------------------------------------
# constructions


def _check_agents(model: KripkeModel, agents: Sequence[str], what: str):
    if tuple(agents) != model.agents:
        raise ModelError(f"{what}: agents {list(agents)} do not match model agents {list(model.agents)}")


def apply_public(model: KripkeModel, vector: Sequence[Formula]) -> KripkeModel:
    """The model after publicly updating every agent's hope relation.

    Worlds, valuation and knowledge stay as they are; agent ``i`` becomes
    correct exactly at the worlds satisfying its hope update formula.
    """
    vector = tuple(vector)
    if len(vector) != len(model.agents):
        raise ModelError(
            f"public update has {len(vector)} formulas but the model has {len(model.agents)} agents"
        )
    correct_masks = {i: checker.truth_mask(model, f) for i, f in zip(model.agents, vector)}
    return KripkeModel._from_masks(
        model.agents, model.props, model.worlds, model._val, model._block, correct_masks
    )


def product(model: KripkeModel, U: HopeUpdateModel) -> KripkeModel:
    """Full product of a model with a hope update model (no preconditions).

    World ``(w, e)`` is named ``"w::e"`` and ``result.provenance`` maps it
    back to ``(w, e)``. Worlds are ordered world-major.
    """
    _check_agents(model, U.agents, f"product with {U.name!r}")
    cache = model._cache
    key = ("product", U)
    if key in cache:
        return cache[key]

    m = len(U.actions)
    nW = len(model.worlds)

    def lift(mask, k):
        out = 0
        for w in bits(mask):
            out |= 1 << (w * m + k)
        return out

    worlds, prov = [], {}
    for w in model.worlds:
        for e in U.actions:
            name = product_world(w, e)
            worlds.append(name)
            prov[name] = (w, e)

    props = list(model.props) + sorted(U.changed_props() - set(model.props))
    val = {}
    for p in props:
        mask = 0
        base = model._val.get(p, 0)
        for k, over in enumerate(U.sigma):
            sub = dict(over).get(p)
            mask |= lift(base if sub is None else checker.truth_mask(model, sub), k)
        val[p] = mask

    block, corr = {}, {}
    pos = {e: k for k, e in enumerate(U.actions)}
    for j, i in enumerate(U.agents):
        mblock = model._block[i]
        act_class = {}
        for b in U.classes[j]:
            ks = [pos[e] for e in b]
            for e in b:
                act_class[pos[e]] = ks
        memo = {}
        per = [0] * (nW * m)
        for w in range(nW):
            B = mblock[w]
            for k in range(m):
                ks = act_class[k]
                ck = (B, ks[0])
                if ck not in memo:
                    out = 0
                    for kk in ks:
                        out |= lift(B, kk)
                    memo[ck] = out
                per[w * m + k] = memo[ck]
        block[i] = per
        c = 0
        for k in range(m):
            c |= lift(checker.truth_mask(model, U.theta[k][j]), k)
        corr[i] = c

    result = KripkeModel._from_masks(model.agents, props, worlds, val, block, corr, prov)
    if checker.CACHE_ENABLED:
        cache[key] = result
    return result


def embed_public(agents: Sequence[str], vector: Sequence[Formula], name: str = "pub") -> PointedUpdateModel:
    """A public update vector as a singleton hope update model."""
    vector = tuple(vector)
    if len(vector) != len(agents):
        raise ModelError(f"public update has {len(vector)} formulas for {len(agents)} agents")
    U = HopeUpdateModel.create(
        name, agents, ["e"], {"e": vector}, {i: "identity" for i in agents}
    )
    return PointedUpdateModel(U, "e")


def identity_update(agents: Sequence[str], name: str = "id") -> PointedUpdateModel:
    return embed_public(agents, [correct(i) for i in agents], name)


def compose(U: HopeUpdateModel, V: HopeUpdateModel, name: str | None = None) -> HopeUpdateModel:
    """``U ; V``: one update model equivalent to applying ``U`` then ``V``."""
    if U.agents != V.agents:
        raise ModelError(f"cannot compose {U.name!r} and {V.name!r}: agent sets differ")
    actions, theta, sigma = [], [], []
    for ke, e in enumerate(U.actions):
        s_e = dict(U.sigma[ke])
        for kf, f in enumerate(V.actions):
            actions.append(pair_name(e, f))
            theta.append(tuple(DynUpdate(U, e, g) for g in V.theta[kf]))
            s_f = dict(V.sigma[kf])
            over = {}
            for p in sorted(set(s_e) | set(s_f)):
                if p in s_f:
                    over[p] = DynUpdate(U, e, s_f[p])
                else:
                    over[p] = s_e[p]
            sigma.append(tuple(sorted(over.items())))
    classes = []
    for bu, bv in zip(U.classes, V.classes):
        classes.append(tuple(
            tuple(pair_name(e, f) for e in b1 for f in b2) for b1 in bu for b2 in bv
        ))
    # sort each block into stored action order
    order = {a: k for k, a in enumerate(actions)}
    classes = tuple(
        tuple(sorted((tuple(sorted(b, key=order.__getitem__)) for b in blocks), key=lambda b: order[b[0]]))
        for blocks in classes
    )
    return HopeUpdateModel(
        name or f"{U.name};{V.name}", U.agents, tuple(actions), tuple(theta), tuple(sigma), classes
    )


def is_equivalence(actions: Sequence[str], pairs: Iterable[tuple]) -> bool:
    rel = set(pairs)
    acts = list(actions)
    return (
        all((a, a) in rel for a in acts)
        and all((b, a) in rel for a, b in rel)
        and all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)
    )


def action_relation(U: HopeUpdateModel, i: str) -> frozenset:
    return frozenset((e, f) for b in U.classes[U._i(i)] for e in b for f in b)


# ---------------------------------------------------------------------------
# isomorphism


def composition_renaming(nested: KripkeModel, inner: KripkeModel) -> dict:
    """Map worlds ``(w::e)::f`` of ``(M x U) x V`` to ``w::(e,f)`` of ``M x (U;V)``."""
    out = {}
    for x, (y, f) in nested.provenance.items():
        w, e = inner.provenance[y]
        out[x] = product_world(w, pair_name(e, f))
    return out


def _signature(model: KripkeModel, k: int):
    sig = [frozenset(p for p in model.props if model._val[p] >> k & 1)]
    for i in model.agents:
        b = model._block[i][k]
        c = model._correct[i]
        sig.append((bin(b).count("1"), bool(c >> k & 1), bin(b & c).count("1")))
    return tuple(sig)


def find_isomorphism(m1: KripkeModel, m2: KripkeModel, limit: int = 64) -> dict | None:
    """A world bijection preserving valuation, knowledge and correctness, or ``None``.

    Backtracking over worlds, pruned by a per-world invariant (true atoms,
    class sizes, correctness). Intended for models of at most ``limit`` worlds.
    """
    if m1.agents != m2.agents or len(m1.worlds) != len(m2.worlds):
        return None
    if len(m1.worlds) > limit:
        raise ValueError(f"isomorphism check limited to {limit} worlds")
    props = {p for p in m1.props if m1._val[p]} | {p for p in m2.props if m2._val.get(p)}
    for p in props:
        if p not in m1._val or p not in m2._val:
            return None
    s1 = [_signature(m1, k) for k in range(len(m1.worlds))]
    s2 = [_signature(m2, k) for k in range(len(m2.worlds))]
    if sorted(map(repr, s1)) != sorted(map(repr, s2)):
        return None
    n = len(m1.worlds)
    order = sorted(range(n), key=lambda k: sum(1 for x in s2 if x == s1[k]))
    assign = [-1] * n
    used = [False] * n

    def consistent(a, b):
        for a2 in range(n):
            b2 = assign[a2]
            if b2 < 0:
                continue
            for i in m1.agents:
                same1 = bool(m1._block[i][a] >> a2 & 1)
                same2 = bool(m2._block[i][b] >> b2 & 1)
                if same1 != same2:
                    return False
        return True

    def search(pos):
        if pos == n:
            return True
        a = order[pos]
        for b in range(n):
            if not used[b] and s2[b] == s1[a] and consistent(a, b):
                assign[a], used[b] = b, True
                if search(pos + 1):
                    return True
                assign[a], used[b] = -1, False
        return False

    if not search(0):
        return None
    return {m1.worlds[a]: m2.worlds[assign[a]] for a in range(n)}


def are_isomorphic(m1: KripkeModel, m2: KripkeModel) -> bool:
    return find_isomorphism(m1, m2) is not None

"""Worked FDIR scenarios as executable checks.

Each ``Scenario`` bundles a model, named update models, truth assertions
(formula strings evaluated at a world, or at every world when ``world`` is
``None``) and figure checks that pin down the correct sets of an updated
model exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import checker, update
from .kripke import KripkeModel, validate
from .syntax import parse
from .update import HopeUpdateModel


@dataclass(frozen=True)
class Assertion:
    world: str | None
    formula: str
    expected: bool
    tag: str = ""


@dataclass(frozen=True)
class FigureCheck:
    """Expected correct sets (and optionally true atoms) after one update.

    Exactly one of ``public`` (formula strings, one per agent) and
    ``update_model`` (a key of ``Scenario.updates``) is given.
    """

    tag: str
    expected_correct: Mapping[str, frozenset]
    public: tuple | None = None
    update_model: str | None = None
    expected_true: Mapping[str, frozenset] = field(default_factory=dict)


@dataclass(frozen=True)
class CheckOutcome:
    scenario: str
    kind: str
    tag: str
    world: str | None
    detail: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class ScenarioResult:
    name: str
    outcomes: list

    @property
    def ok(self) -> bool:
        return all(o.ok for o in self.outcomes)

    @property
    def failures(self) -> list:
        return [o for o in self.outcomes if not o.ok]

    def table(self) -> str:
        rows = []
        for o in self.outcomes:
            mark = "PASS" if o.ok else "FAIL"
            where = o.world if o.world is not None else "*"
            rows.append(f"{mark}  {o.kind:<7} {where:<10} {o.tag:<28} {o.detail}")
        return "\n".join(rows)


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    model: KripkeModel
    assertions: tuple
    figures: tuple = ()
    updates: Mapping[str, HopeUpdateModel] = field(default_factory=dict)

    def parse(self, text: str):
        return parse(text, self.model.agents, None, self.updates)

    def updated_model(self, fig: FigureCheck) -> KripkeModel:
        if fig.public is not None:
            return update.apply_public(self.model, [self.parse(t) for t in fig.public])
        return update.product(self.model, self.updates[fig.update_model])

    def run(self, cross_check: bool = False) -> ScenarioResult:
        out = []
        report = validate(self.model)
        out.append(CheckOutcome(self.name, "model", "source model in KH", None, str(report), True, report.ok))
        for a in self.assertions:
            phi = self.parse(a.formula)
            if a.world is None:
                actual = bool(checker.valid_in_model(self.model, phi))
                if cross_check:
                    for w in self.model.worlds:
                        checker.evaluate(self.model, w, phi, cross_check=True)
            else:
                actual = checker.evaluate(self.model, a.world, phi, cross_check=cross_check)
            out.append(CheckOutcome(self.name, "truth", a.tag, a.world, a.formula, a.expected, actual))
        for fig in self.figures:
            after = self.updated_model(fig)
            rep = validate(after)
            out.append(CheckOutcome(self.name, "model", f"{fig.tag} in KH", None, str(rep), True, rep.ok))
            got = {i: after.correct_set(i) for i in fig.expected_correct}
            want = {i: frozenset(v) for i, v in fig.expected_correct.items()}
            out.append(CheckOutcome(self.name, "figure", fig.tag, None, "correct sets", want, got))
            if fig.expected_true:
                got_v = {w: after.true_props(w) for w in fig.expected_true}
                want_v = {w: frozenset(v) for w, v in fig.expected_true.items()}
                out.append(CheckOutcome(self.name, "figure", fig.tag, None, "valuation", want_v, got_v))
        return ScenarioResult(self.name, out)

    def formulas(self) -> list:
        texts = [a.formula for a in self.assertions]
        for fig in self.figures:
            texts.extend(fig.public or ())
        for U in self.updates.values():
            texts.extend(str(f) for f in U.payload_formulas())
        return texts


# ---------------------------------------------------------------------------
# models


def two_bit_model() -> KripkeModel:
    """Two agents, each seeing its own bit; world ``ij`` has ``p_a = i``, ``p_b = j``.

    ``a`` is correct only at 00, ``b`` is correct wherever ``p_a`` or ``p_b`` holds.
    """
    return KripkeModel(
        ("a", "b"),
        ("p_a", "p_b"),
        ("00", "10", "01", "11"),
        {"p_a": ["10", "11"], "p_b": ["01", "11"]},
        {"a": [["00", "01"], ["10", "11"]], "b": [["00", "10"], ["01", "11"]]},
        {"a": ["00"], "b": ["10", "01", "11"]},
    )


def abp_model() -> KripkeModel:
    """Sender/receiver model, worlds named ``p_s q_s . p_r q_r``.

    Each agent sees its own two bits; the sender is correct everywhere and
    the receiver exactly where its backup bit differs from ``q_r``.
    """
    worlds = ("00.00", "00.01", "01.00", "01.01")
    val = {p: [] for p in ("p_s", "q_s", "p_r", "q_r")}
    for w in worlds:
        for bit, p in zip(w.replace(".", ""), ("p_s", "q_s", "p_r", "q_r")):
            if bit == "1":
                val[p].append(w)
    return KripkeModel(
        ("s", "r"),
        ("p_s", "q_s", "p_r", "q_r"),
        worlds,
        val,
        {"s": [["00.00", "00.01"], ["01.00", "01.01"]], "r": [["00.00", "01.00"], ["00.01", "01.01"]]},
        {"s": list(worlds), "r": ["00.01", "01.01"]},
    )


def _u(agents, text):
    return parse(text, agents)


def private_correction_update() -> HopeUpdateModel:
    A = ("a", "b")
    return HopeUpdateModel.create(
        "U", A, ["c", "noc"],
        {"c": [_u(A, "~H{a} false | p_b"), _u(A, "~H{b} false")],
         "noc": [_u(A, "~H{a} false"), _u(A, "~H{b} false")]},
        {"a": "identity", "b": "universal"},
    )


def receiver_recovery_update() -> HopeUpdateModel:
    A = ("s", "r")
    return HopeUpdateModel.create(
        "U", A, ["scr", "noscr"],
        {"scr": [_u(A, "~H{s} false"), _u(A, "~H{r} false | (p_r <-> q_r)")],
         "noscr": [_u(A, "~H{s} false"), _u(A, "~H{r} false")]},
        {"s": "universal", "r": "identity"},
        sigma={"scr": {"q_r": _u(A, "~p_r")}},
    )


def who_self_corrects_update(agents=("a", "b", "c"), constraints=None) -> HopeUpdateModel:
    """One action per agent; in ``e_i`` agent ``i`` self-corrects (if it knows it is faulty).

    Agent ``j`` cannot tell ``e_i`` from ``e_k`` unless one of them is its own action.
    """
    agents = tuple(agents)
    constraints = constraints or {}
    actions = [f"e_{i}" for i in agents]
    theta = {}
    for i in agents:
        psi = constraints.get(i, "true")
        theta[f"e_{i}"] = {
            j: _u(agents, f"~H{{{j}}} false | ({psi}) & K{{{j}}} H{{{j}}} false" if j == i else f"~H{{{j}}} false")
            for j in agents
        }
    KU = {}
    for j in agents:
        KU[j] = [(f"e_{j}",), tuple(f"e_{i}" for i in agents if i != j)]
    return HopeUpdateModel.create("U", agents, actions, theta, KU)


def who_self_corrects_relation(agents) -> dict:
    """``e_i ~_j e_k`` iff ``i = j = k`` or ``j`` is neither ``i`` nor ``k``."""
    return {
        j: frozenset((f"e_{i}", f"e_{k}") for i in agents for k in agents if (i == j == k) or j not in (i, k))
        for j in agents
    }


def recovery_source_update() -> HopeUpdateModel:
    A = ("a", "b", "c")
    theta = {
        f"e_{i}": {
            "a": _u(A, f"~H{{a}} false | recv_{i} & K{{a}} H{{a}} false"),
            "b": _u(A, "~H{b} false"),
            "c": _u(A, "~H{c} false"),
        }
        for i in ("b", "c")
    }
    return HopeUpdateModel.create(
        "U", A, ["e_b", "e_c"], theta, {"a": "identity", "b": "universal", "c": "universal"}
    )


# ---------------------------------------------------------------------------
# scenarios


def _public_scenario(name, summary, vector, assertions, expected_a, expected_b, extra=()):
    M = two_bit_model()
    fig = FigureCheck(
        "after public update",
        {"a": frozenset(expected_a), "b": frozenset(expected_b)},
        public=tuple(vector),
    )
    return Scenario(name, summary, M, tuple(extra) + tuple(assertions), (fig,))


def intro_correction() -> Scenario:
    upd = "[~H{a} false | p_b]{a}"
    return _public_scenario(
        "intro-correction",
        "a becomes correct wherever p_b holds; b unchanged",
        ("~H{a} false | p_b", "~H{b} false"),
        [
            Assertion("00", "~H{a} false", True, "a correct at 00"),
            Assertion("00", "~H{b} false", False, "b faulty at 00"),
            Assertion("01", "~H{a} false", False, "a faulty at 01"),
            Assertion(None, "~H{a} false", False, "a not correct everywhere"),
            Assertion("00", "K{a} ~H{a} false", False, "before: no self-knowledge"),
            Assertion("00", f"{upd} K{{a}} ~H{{a}} false", True, "after: self-knowledge"),
        ],
        {"00", "01", "11"},
        {"10", "01", "11"},
    )


def diagnosis_by_b() -> Scenario:
    upd = "[~H{a} false | K{b} H{a} false]{a}"
    return _public_scenario(
        "diagnosis-by-b",
        "a becomes correct where b knows a is faulty",
        ("~H{a} false | K{b} H{a} false", "~H{b} false"),
        [
            Assertion("00", f"{upd} ~H{{a}} false", True, "a stays correct"),
            Assertion("00", f"{upd} K{{a}} ~H{{a}} false", True, "a knows it is correct"),
            Assertion("10", f"{upd} H{{a}} false", True, "a stays faulty"),
            Assertion("10", f"{upd} Kh{{a}} ~H{{a}} false", True, "a thinks correct possible"),
            Assertion("10", f"{upd} K{{b}} Kh{{a}} ~H{{a}} false", True, "b knows the above"),
        ],
        {"00", "01", "11"},
        {"10", "01", "11"},
    )


def self_correction() -> Scenario:
    upd = "[~H{a} false | (p_b & K{a} H{a} false)]{a}"
    return _public_scenario(
        "self-correction",
        "a self-corrects when it knows it is faulty and p_b holds",
        ("~H{a} false | (p_b & K{a} H{a} false)", "~H{b} false"),
        [
            Assertion("00", f"{upd} ~H{{a}} false", True, "a stays correct"),
            Assertion("00", f"{upd} Kh{{a}} H{{a}} false", True, "a thinks faulty possible"),
            Assertion("10", f"{upd} H{{a}} false", True, "a stays faulty"),
            Assertion("10", f"{upd} Kh{{a}} ~H{{a}} false", True, "a thinks correct possible"),
            Assertion("10", f"{upd} K{{b}} Kh{{a}} ~H{{a}} false", True, "b knows the above"),
            Assertion("01", f"{upd} H{{a}} false", True, "01 not corrected"),
        ],
        {"00", "11"},
        {"10", "01", "11"},
    )


def fail_safe() -> Scenario:
    upd = "[K{a} H{a} false]{a}"
    return _public_scenario(
        "fail-safe",
        "a is correct afterwards exactly where it knew it was faulty",
        ("K{a} H{a} false", "~H{b} false"),
        [
            Assertion("00", f"{upd} H{{a}} false", True, "a becomes faulty"),
            Assertion("00", f"{upd} K{{a}} H{{a}} false", True, "a knows it is faulty"),
            Assertion("10", f"{upd} ~H{{a}} false", True, "a becomes correct"),
            Assertion("10", f"{upd} K{{a}} ~H{{a}} false", True, "a knows it is correct"),
            Assertion("10", f"{upd} Kh{{b}} K{{a}} ~H{{a}} false", True, "b thinks that possible"),
        ],
        {"10", "11"},
        {"10", "01", "11"},
    )


def belief_correction() -> Scenario:
    upd = "[~H{b} false | B{a} H{b} false]{b}"
    return _public_scenario(
        "belief-correction",
        "b becomes correct where a believes b is faulty",
        ("~H{a} false", "~H{b} false | B{a} H{b} false"),
        [
            Assertion("00", "B{a} H{b} false", True, "a believes b faulty"),
            Assertion("00", f"{upd} ~H{{b}} false", True, "b becomes correct"),
            Assertion("00", f"{upd} K{{b}} ~H{{b}} false", True, "b knows it is correct"),
            Assertion("00", f"{upd} ~B{{a}} H{{b}} false", True, "belief withdrawn"),
            Assertion("01", f"{upd} K{{a}} ~H{{b}} false", True, "a knows b correct"),
            Assertion("01", f"{upd} K{{b}} K{{a}} ~H{{b}} false", True, "b knows a knows"),
            Assertion(None, f"{upd} ~H{{b}} false", True, "b correct everywhere"),
        ],
        {"00"},
        {"00", "10", "01", "11"},
    )


def private_correction() -> Scenario:
    U = private_correction_update()
    M = two_bit_model()
    cube = FigureCheck(
        "product cube",
        {
            "a": frozenset({"00::c", "01::c", "11::c", "00::noc"}),
            "b": frozenset(f"{w}::{e}" for w in ("10", "01", "11") for e in ("c", "noc")),
        },
        update_model="U",
    )
    return Scenario(
        "private-correction",
        "a is corrected on p_b while b cannot tell whether the correction happened",
        M,
        (
            Assertion("01", "[U:c] (~H{a} false & K{a} ~H{a} false)", True, "a corrected and knows"),
            Assertion("01", "[U:c] ~K{b} K{a} ~H{a} false", True, "b does not know that"),
            Assertion("01", "[U:c] ~(K{b} H{a} false | K{b} ~H{a} false)", True, "b unsure about a"),
            Assertion("01", "[U:noc] H{a} false", True, "without correction a stays faulty"),
        ),
        (cube,),
        {"U": U},
    )


def who_self_corrects() -> Scenario:
    A = ("a", "b", "c")
    U = who_self_corrects_update(A)
    M = KripkeModel(A, ("p",), ("w",), {"p": []}, {i: [["w"]] for i in A}, {i: [] for i in A})
    fig = FigureCheck(
        "one world per self-correcting agent",
        {i: frozenset({f"w::e_{i}"}) for i in A},
        update_model="U",
    )
    return Scenario(
        "who-self-corrects",
        "some agent self-corrects; the others cannot tell which one",
        M,
        (
            Assertion("w", "K{a} H{a} false & K{b} H{b} false & K{c} H{c} false", True, "all know they are faulty"),
            Assertion("w", "[U:e_a] (~H{a} false & K{a} ~H{a} false)", True, "a corrected and knows"),
            Assertion("w", "[U:e_a] (~K{b} ~H{a} false & ~K{b} H{a} false)", True, "b unsure about a"),
            Assertion("w", "[U:e_a] (Kh{b} ~H{a} false & Kh{b} ~H{c} false)", True, "b: a or c may be fixed"),
            Assertion("w", "[U:e_a] K{b} H{b} false", True, "b knows it is still faulty"),
            Assertion("w", "[U:e_a] H{c} false", True, "c stays faulty"),
        ),
        (fig,),
        {"U": U},
    )


def recovery_source() -> Scenario:
    A = ("a", "b", "c")
    U = recovery_source_update()
    M = KripkeModel(
        A, ("recv_b", "recv_c"), ("u", "v"),
        {"recv_b": ["u"], "recv_c": ["v"]},
        {"a": [["u"], ["v"]], "b": [["u", "v"]], "c": [["u", "v"]]},
        {"a": [], "b": ["u", "v"], "c": ["u", "v"]},
    )
    fig = FigureCheck(
        "a recovers where its chosen source delivered",
        {"a": frozenset({"u::e_b", "v::e_c"}), "b": frozenset(f"{w}::{e}" for w in "uv" for e in ("e_b", "e_c"))},
        update_model="U",
    )
    return Scenario(
        "recovery-source",
        "a self-corrects from one of two possible sources; only a knows which",
        M,
        (
            Assertion("u", "[U:e_b] ~H{a} false", True, "source b delivered"),
            Assertion("u", "[U:e_c] H{a} false", True, "source c did not"),
            Assertion("u", "[U:e_b] K{a} ~H{a} false", True, "a knows it recovered"),
            Assertion("u", "[U:e_b] (~K{b} ~H{a} false & ~K{b} H{a} false)", True, "b unsure about a"),
        ),
        (fig,),
        {"U": U},
    )


def abp_fault_and_recover() -> Scenario:
    """Receiver self-correction with state recovery ``q_r := ~p_r``."""
    M = abp_model()
    U = receiver_recovery_update()
    scr = [f"{w}::scr" for w in M.worlds]
    fig = FigureCheck(
        "recovery product",
        {
            "s": frozenset(f"{w}::{e}" for w in M.worlds for e in ("scr", "noscr")),
            "r": frozenset(scr + ["00.01::noscr", "01.01::noscr"]),
        },
        update_model="U",
        expected_true={
            "00.00::scr": frozenset({"q_r"}),
            "01.00::scr": frozenset({"q_s", "q_r"}),
            "00.00::noscr": frozenset(),
            "01.01::scr": frozenset({"q_s", "q_r"}),
        },
    )
    return Scenario(
        "abp-recovery",
        "the receiver restores q_r from its backup bit; the sender cannot tell",
        M,
        (
            Assertion(None, "H{r} false <-> (p_r <-> q_r)", True, "faulty iff backup equal"),
            Assertion("00.00", "[U:scr] (~H{r} false & K{r} q_r)", True, "r corrected, knows q_r"),
            Assertion("00.00", "[U:scr] K{r} ~H{r} false", True, "r knows it is correct"),
            Assertion("00.00", "[U:scr] (~K{r} q_s & ~K{r} ~q_s)", True, "r unsure about q_s"),
            Assertion("00.00", "[U:scr] Kh{s} H{r} false", True, "s thinks r may be faulty"),
        ),
        (fig,),
        {"U": U},
    )


def builtin_scenarios() -> list:
    return [
        intro_correction(),
        diagnosis_by_b(),
        self_correction(),
        fail_safe(),
        belief_correction(),
        private_correction(),
        who_self_corrects(),
        recovery_source(),
        abp_fault_and_recover(),
    ]


def scenario_by_name(name: str) -> Scenario:
    for s in builtin_scenarios():
        if s.name == name:
            return s
    raise KeyError(name)


def scenario_names() -> list:
    return [s.name for s in builtin_scenarios()]

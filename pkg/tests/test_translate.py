import random

import pytest
from hypothesis import given

from hopelogic import axioms
from hopelogic.checker import truth_mask
from hopelogic.formula import (
    TOP, Atom, Conj, DynUpdate, Hope, Know, Neg, PubUpdate, complexity, correct, implies, is_static,
)
from hopelogic.generate import random_update_model
from hopelogic.scenarios import builtin_scenarios, receiver_recovery_update
from hopelogic.translate import (
    NonDecreasingStep, RewriteTrace, check_reduction_axioms, dynamic_positions, lint_static, translate,
)
from hopelogic.update import HopeUpdateModel, embed_public
from strategies import PROPS, dynamic_formulas, kh_models

AB = ("a", "b")
p, q = Atom("p"), Atom("q")


def test_static_formula_unchanged():
    out, trace = translate(Know("a", p))
    assert out == Know("a", p) and len(trace) == 0


def test_public_atom():
    out, trace = translate(PubUpdate((Hope("a", p), q), p), AB)
    assert out == p
    assert [s.rule for s in trace] == ["pub-atom"]


def test_factual_atom_becomes_substitution():
    U = receiver_recovery_update()
    out, _ = translate(DynUpdate(U, "scr", Atom("q_r")))
    assert out == Neg(Atom("p_r"))
    out, _ = translate(DynUpdate(U, "noscr", Atom("q_r")))
    assert out == Atom("q_r")


def test_public_hope_clause():
    f = PubUpdate((correct("a"), correct("b")), Hope("a", q))
    out, trace = translate(f, AB)
    assert out == implies(correct("a"), Know("a", implies(correct("a"), q)))
    assert [s.rule for s in trace][:1] == ["pub-hope"]


def test_private_know_clause_conjoins_over_action_class():
    U = HopeUpdateModel.create("U", AB, ["e0", "e1", "e2"], {e: [p, q] for e in ("e0", "e1", "e2")},
                               {"a": "universal", "b": "identity"})
    out, _ = translate(DynUpdate(U, "e0", Know("a", p)))
    assert out == Conj(Know("a", p), Conj(Know("a", p), Know("a", p)))
    out, _ = translate(DynUpdate(U, "e1", Know("b", p)))
    assert out == Know("b", p)


def test_nested_updates_compose():
    U = random_update_model(random.Random(2), AB, PROPS, name="U")
    V = random_update_model(random.Random(3), AB, PROPS, name="V")
    f = DynUpdate(U, U.actions[0], DynUpdate(V, V.actions[0], Know("b", p)))
    out, trace = translate(f)
    assert is_static(out)
    assert "dyn-dyn" in {s.rule for s in trace}


def test_mixed_public_inside_private():
    U = random_update_model(random.Random(4), AB, PROPS, name="U")
    f = DynUpdate(U, U.actions[-1], PubUpdate((p, Hope("b", q)), Hope("a", p)))
    out, _ = translate(f)
    lint_static(out)


def test_trace_records_positions_and_decrease():
    f = Conj(p, Neg(PubUpdate((p, q), Know("a", Hope("b", p)))))
    _, trace = translate(f, AB)
    assert trace.steps[0].position == ("right", "body")
    assert trace.strictly_decreasing
    assert all("->" in line for line in trace.lines())


def test_trace_rejects_non_decreasing_step():
    with pytest.raises(NonDecreasingStep):
        RewriteTrace().record("pub-neg", (), 5, 5)


def test_lint_reports_positions():
    lint_static(Know("a", p))
    f = Conj(p, Know("a", PubUpdate((p, q), q)))
    assert dynamic_positions(f) == [("right", "body")]
    with pytest.raises(ValueError, match="right.body"):
        lint_static(f)


def test_public_embedding_translates_alike(base):
    vec = (Hope("a", Atom("p_b")), correct("b"))
    body = Know("b", Hope("a", Atom("p_a")))
    pu = embed_public(AB, vec)
    s1, _ = translate(PubUpdate(vec, body), AB)
    s2, _ = translate(DynUpdate(pu.model, "e", body))
    assert truth_mask(base, s1, {}) == truth_mask(base, s2, {})


def test_agent_order_needed_for_ambiguous_vectors():
    with pytest.raises(ValueError):
        translate(PubUpdate((p, q, TOP), Hope("a", p)))


@given(kh_models(agents=AB, max_worlds=3), dynamic_formulas(AB))
def test_equiexpressive_on_random_formulas(m, f):
    static, trace = translate(f, AB)
    assert is_static(static)
    assert trace.strictly_decreasing
    assert truth_mask(m, static, {}) == truth_mask(m, f, {})


@given(dynamic_formulas(("a", "b", "c"), depth=2))
def test_every_step_decreases_complexity(f):
    _, trace = translate(f, ("a", "b", "c"))
    assert all(s.after < s.before for s in trace)
    if trace.steps:
        assert trace.steps[0].before <= complexity(f)


def test_scenario_corpus_is_equiexpressive():
    for s in builtin_scenarios():
        for a in s.assertions:
            f = s.parse(a.formula)
            static, _ = translate(f, s.model.agents)
            lint_static(static)
            assert truth_mask(s.model, static, {}) == truth_mask(s.model, f, {}), (s.name, a.formula)


def test_reduction_axioms_hold_on_base_model(base):
    report = check_reduction_axioms(base, samples=15, seed=1)
    assert report.ok, str(report)
    assert set(report.checked) == set(axioms.REDUCTION_SCHEMAS)


def test_singleton_update_instances_agree_with_public_axioms(base):
    rng = random.Random(5)
    for _ in range(20):
        inst = axioms.reduction_instance("public-hope", rng, AB, ("p_a", "p_b"))
        pu = embed_public(AB, inst.left.vector)
        embedded = DynUpdate(pu.model, "e", inst.left.body)
        assert truth_mask(base, embedded, {}) == truth_mask(base, inst.right, {})


def test_mutated_axiom_is_caught(base, monkeypatch):
    real = axioms.reduction_instance

    def broken(schema, rng, agents, props, depth=2):
        inst = real(schema, rng, agents, props, depth)
        # drop the antecedent of the hope clause
        return axioms.ReductionInstance(schema, inst.left, Know(inst.left.body.agent, inst.left.body.body))

    monkeypatch.setattr(axioms, "reduction_instance", broken)
    report = check_reduction_axioms(base, samples=30, seed=0, schemas=["public-hope"])
    assert not report.ok
    assert all(d.world in base.worlds for d in report.discrepancies)

import random

import pytest
from hypothesis import assume, given

import oracle
from hopelogic import checker
from hopelogic.axioms import STATIC_AXIOMS, static_axiom
from hopelogic.checker import (
    SearchBounds, count_models, enumerate_models, evaluate, find_countermodel, random_model, truth_set,
    valid_in_model,
)
from hopelogic.formula import (
    BOT, TOP, Atom, Conj, Know, Neg, agents_of, belief, correct, faulty, implies, lor, upd_single,
)
from hopelogic.generate import random_static
from hopelogic.kripke import ModelError, validate
from hopelogic.scenarios import private_correction_update, receiver_recovery_update
from hopelogic.syntax import parse
from hopelogic.update import apply_public
from strategies import PROPS, dynamic_formulas, kh_models, public_formulas, seeds, static_formulas

AB = ("a", "b")


def test_correct_but_unaware(base):
    assert evaluate(base, "00", correct("a"))
    assert not evaluate(base, "00", Know("a", correct("a")))


def test_learns_correctness_after_diagnosis(base):
    f = upd_single(AB, "a", lor(correct("a"), Know("b", faulty("a"))), Know("a", correct("a")))
    assert evaluate(base, "00", f, cross_check=True)


def test_fail_safe_self_knowledge(base):
    f = upd_single(AB, "a", Know("a", faulty("a")), Know("a", correct("a")))
    assert evaluate(base, "10", f, cross_check=True)


def test_private_correction_leaves_b_unsure(base):
    U = private_correction_update()
    f = parse("[U:c] ~(K{b} H{a} false | K{b} ~H{a} false)", AB, updates={"U": U})
    assert evaluate(base, "01", f, cross_check=True)


def test_receiver_learns_recovered_bit(abp):
    U = receiver_recovery_update()
    f = parse("[U:scr] (~H{r} false & K{r} q_r)", ("s", "r"), updates={"U": U})
    assert evaluate(abp, "00.00", f, cross_check=True)


@given(kh_models())
def test_top_everywhere(m):
    assert truth_set(m, TOP) == set(m.worlds)
    assert valid_in_model(m, lor(Atom("p"), Neg(Atom("p"))))


def test_validity_witness(base):
    res = valid_in_model(base, correct("a"))
    assert not res and res.witness in {"10", "01", "11"}
    after = apply_public(base, (correct("a"), lor(correct("b"), belief("a", faulty("b")))))
    assert valid_in_model(after, correct("b"))


def test_unknown_world_or_agent(base):
    with pytest.raises(ModelError):
        evaluate(base, "nowhere", TOP)
    with pytest.raises(ModelError):
        evaluate(base, "00", Know("z", TOP))


@given(kh_models(), static_formulas(("a", "b", "c")))
def test_static_agrees_with_reference(m, f):
    assume(agents_of(f) <= set(m.agents))
    ref = oracle.from_model(m)
    assert truth_set(m, f) == {w for w in m.worlds if oracle.holds(ref, w, f)}


@given(kh_models(agents=AB), public_formulas(AB))
def test_public_agrees_with_reference(m, f):
    ref = oracle.from_model(m)
    assert truth_set(m, f) == {w for w in m.worlds if oracle.holds(ref, w, f)}


@given(kh_models(agents=AB, max_worlds=3), dynamic_formulas(AB))
def test_dynamic_agrees_with_reference(m, f):
    ref = oracle.from_model(m)
    assert truth_set(m, f) == {w for w in m.worlds if oracle.holds(ref, w, f)}


@given(kh_models(agents=AB, max_worlds=3), dynamic_formulas(AB))
def test_cache_is_transparent(m, f):
    cached = truth_set(m, f)
    checker.CACHE_ENABLED = False
    try:
        m.clear_cache()
        uncached = truth_set(m, f)
    finally:
        checker.CACHE_ENABLED = True
    assert cached == uncached


@pytest.mark.parametrize("name", STATIC_AXIOMS)
def test_axioms_valid_on_random_models(name):
    rng = random.Random(name)
    for _ in range(60):
        agents = rng.choice([("a",), AB, ("a", "b", "c")])
        m = random_model(rng, agents, PROPS, rng.randint(1, 5))
        psi = static_axiom(name, rng, agents, PROPS, depth=2)
        assert valid_in_model(m, psi), (name, psi)


@given(kh_models(), seeds)
def test_belief_trivial_exactly_where_no_correct_alternative(m, seed):
    rng = random.Random(seed)
    for i in m.agents:
        for w in m.worlds:
            no_correct = not (m.k_class(w, i) & m.correct_set(i))
            assert evaluate(m, w, belief(i, BOT)) == no_correct
            if no_correct:
                phi = random_static(rng, m.agents, PROPS, 2)
                assert evaluate(m, w, belief(i, phi))


def test_model_enumeration_counts():
    assert count_models(1, 1, 1) == 1 * 2 * 2
    assert sum(1 for _ in enumerate_models(("a",), ("p",), 2)) == count_models(2, 1, 1)
    assert sum(1 for _ in enumerate_models(AB, (), 2)) == count_models(2, 2, 0) == 64
    for m in enumerate_models(("a",), ("p",), 3):
        assert validate(m).ok


def test_countermodel_to_self_knowledge_of_correctness():
    res = find_countermodel(implies(correct("a"), Know("a", correct("a"))))
    assert res.found
    assert not evaluate(res.model, res.world, implies(correct("a"), Know("a", correct("a"))))
    assert validate(res.model).ok


def test_countermodel_to_self_knowledge_of_fault():
    res = find_countermodel(implies(faulty("a"), Know("a", faulty("a"))))
    assert res.found


def test_no_countermodel_for_axiom_instance():
    res = find_countermodel(Neg(Conj(correct("a"), faulty("a"))), bounds=SearchBounds(max_models=3000))
    assert not res.found and res.examined == 3000 and res.exhaustive_up_to >= 2


def test_search_is_deterministic():
    phi = implies(Know("a", Atom("p")), Know("b", Atom("p")))
    r1 = find_countermodel(phi, bounds=SearchBounds(seed=7))
    r2 = find_countermodel(phi, bounds=SearchBounds(seed=7))
    assert r1.found and (r1.world, r1.examined) == (r2.world, r2.examined)
    assert r1.model == r2.model


def test_search_bounds_checked():
    with pytest.raises(ValueError):
        SearchBounds(max_models=0)
    with pytest.raises(ValueError):
        find_countermodel(Know("c", TOP), agents=AB + ("c",), bounds=SearchBounds(max_agents=2))

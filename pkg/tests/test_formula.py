import random

import pytest
from hypothesis import given

from hopelogic.axioms import REDUCTION_SCHEMAS, reduction_instance
from hopelogic.formula import (
    BOT, TOP, Atom, Conj, DynUpdate, Hope, Know, Neg, PubUpdate, b_at_least, belief, byz, complexity,
    correct, expand_derived, faulty, lor, threshold, upd_single,
)
from hopelogic.generate import random_update_model
from hopelogic.scenarios import builtin_scenarios
from hopelogic.syntax import FormulaSyntaxError, parse, to_text
from strategies import dynamic_formulas, public_formulas, static_formulas

AB = ("a", "b")
p, q = Atom("p"), Atom("q")


def test_parse_correctness_atom():
    assert parse("~H{a} false", AB) == Neg(Hope("a", BOT))


def test_parse_single_agent_update():
    got = parse("[~H{a} false | K{b} H{a} false]{a} K{a} ~H{a} false", AB)
    want = upd_single(AB, "a", lor(correct("a"), Know("b", faulty("a"))), Know("a", correct("a")))
    assert got == want
    assert got.vector[1] == correct("b")


def test_parse_full_vector_and_named_update():
    U = random_update_model(random.Random(0), AB, ("p",), name="U")
    f = parse("[p, q] [U:e0] (p -> q)", AB, updates={"U": U})
    assert isinstance(f, PubUpdate) and isinstance(f.body, DynUpdate)
    assert f.body.model is U and f.body.action == "e0"


@pytest.mark.parametrize("text", ["p -> q -> p", "p & q | p", "~K{a} p <-> Hh{b} q", "B{a} ~p"])
def test_round_trip_examples(text):
    f = parse(text, AB)
    assert parse(to_text(f), AB) == f


def test_implication_is_right_associative():
    assert parse("p -> q -> p", AB) == parse("p -> (q -> p)", AB)
    assert parse("p & q | p", AB) == lor(Conj(p, q), p)


@pytest.mark.parametrize("text,line,col", [
    ("K{a} (p &", 1, 10),
    ("p &\n  ~ ]", 2, 5),
    ("K{z} p", 1, 3),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(FormulaSyntaxError) as exc:
        parse(text, AB)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_semantic_parse_errors():
    with pytest.raises(FormulaSyntaxError, match="unknown proposition"):
        parse("r", AB, props=("p",))
    with pytest.raises(FormulaSyntaxError):
        parse("[p, q, p] p", AB)
    with pytest.raises(FormulaSyntaxError):
        parse("[V:e] p", AB, updates={})


def test_corpus_round_trip():
    texts = [t for s in builtin_scenarios() for t in s.formulas()]
    assert len(texts) > 40
    for s in builtin_scenarios():
        for t in s.formulas():
            f = s.parse(t)
            assert s.parse(to_text(f)) == f


@given(static_formulas(("a", "b", "c"), max_depth=6))
def test_static_round_trip(f):
    assert parse(to_text(f), ("a", "b", "c")) == f


@given(public_formulas(AB))
def test_public_round_trip(f):
    assert parse(to_text(f), AB) == f


def test_complexity_examples():
    assert complexity(p) == 1
    assert complexity(TOP) == 1
    assert complexity(Hope("a", p)) == 5
    assert complexity(PubUpdate((p, p), q)) == 2
    assert complexity(Neg(Conj(p, Know("a", q)))) == 4
    assert complexity(PubUpdate((Hope("a", p), p), Neg(q))) == (5 + 1) * 2


def test_complexity_of_update_model_counts_actions_and_substitutions():
    from hopelogic.update import HopeUpdateModel
    U = HopeUpdateModel.create("U", ("a",), ["e", "f"], {"e": [p], "f": [p]}, {"a": "universal"},
                               sigma={"e": {"q": Hope("a", Hope("a", p))}})
    assert complexity(DynUpdate(U, "e", q)) == (9 + 2) * 1


@given(static_formulas(("a", "b")))
def test_complexity_positive_and_monotone(f):
    c = complexity(f)
    assert c >= 1
    for wrap in (Neg(f), Conj(f, p), Conj(q, f), Know("a", f), Hope("b", f)):
        assert complexity(wrap) > c


@given(dynamic_formulas(AB))
def test_dynamic_complexity_positive(f):
    assert complexity(f) >= 1


@pytest.mark.parametrize("schema", REDUCTION_SCHEMAS)
def test_reduction_axioms_decrease_complexity(schema):
    rng = random.Random(schema)
    for _ in range(40):
        agents = rng.choice([AB, ("a", "b", "c")])
        inst = reduction_instance(schema, rng, agents, ("p", "q"), depth=2)
        assert complexity(inst.left) > complexity(inst.right), inst


def test_byz_expansions():
    assert byz(AB, 0) == Conj(correct("a"), correct("b"))
    assert byz(AB, 1) == lor(correct("a"), correct("b"))
    assert byz(AB, 2) == TOP
    assert expand_derived("byz", AB, 1) == byz(AB, 1)


def test_b_at_least_expansion():
    got = b_at_least(AB, 1, faulty("a"))
    assert got == lor(belief("a", faulty("a")), belief("b", faulty("a")))


def test_threshold_expansion():
    got = threshold(("a", "b", "c"), (p, q, TOP), 2)
    assert to_text(got) == "p & q | (p & true | q & true)"


def test_belief_definition():
    assert belief("a", p) == Know("a", Neg(Conj(correct("a"), Neg(p))))


def test_expansion_bounds():
    with pytest.raises(ValueError):
        byz(AB, 3)
    with pytest.raises(ValueError):
        byz([f"x{k}" for k in range(9)], 1)
    with pytest.raises(ValueError):
        expand_derived("nonsense", AB)


def test_public_vector_arity_enforced():
    with pytest.raises(ValueError):
        upd_single(AB, "z", p, q)

import random

import pytest

from idlogic.engine import literal_well_founded_model
from idlogic.errors import LimitExceeded
from idlogic.grounder import ground_definition, ground_literal_oracle, ground_sentence
from idlogic.parser import parse_formula, parse_theory
from idlogic.randgen import random_body, random_corpus, random_structure
from idlogic.structures import GroundAtom, Structure, TruthValue, eval_formula
from idlogic.syntax import And, Atom, Definition, Elem, Vocabulary


def test_even_cycle_grounding(load):
    t, s = load("even-cycle.idl", "even-cycle.struct")
    g = ground_definition(t.definitions[0], s)
    assert [str(r) for r in g.rules] == ["even(@d0).", "even(@d1) <- ~even(@d0).", "even(@d1) <- ~even(@d1)."]
    assert g.defined_atoms == (GroundAtom("even", ("d0",)), GroundAtom("even", ("d1",)))


def test_empty_definition_grounding():
    s = Structure(["a"], predicates={"p": {}}, arities={"p": 1})
    g = ground_definition(Definition(("p",), ()), s)
    assert g.defined_atoms == (GroundAtom("p", ("a",)),) and g.rules == ()


def test_father_rule_instances(load):
    t, s = load("family3.idl", "family.struct")
    s2 = Structure(["a", "b"], predicates={p: {} for p in t.vocabulary.predicates}, arities=dict(t.vocabulary.predicates))
    assert len(ground_definition(t.definitions[0], s2).rules) == 4
    assert len(ground_definition(t.definitions[0], s).rules) == 9


def test_grounding_is_order_independent():
    for case in random_corpus(21, 40):
        d = case.definition
        rules = list(d.rules)
        random.Random(1).shuffle(rules)
        a = ground_definition(d, case.structure)
        b = ground_definition(Definition(d.defined, tuple(rules)), case.structure)
        assert a.rules == b.rules


def test_literal_oracle_open_true():
    t = parse_theory("vocab { pred p/0, q/0, r/0. } define p { p <- q | r. }")
    s = Structure([], predicates={"q": {(): TruthValue.TRUE}, "r": {(): TruthValue.TRUE}, "p": {}}, arities={"p": 0})
    lg = ground_literal_oracle(t.definitions[0], s, relevant_only=False)
    # the body holds whatever p is, so every consistent literal set over {p} is a body
    assert {body for _, body in lg.rules} == {frozenset(), frozenset({(GroundAtom("p", ()), True)}), frozenset({(GroundAtom("p", ()), False)})}


def test_literal_oracle_fact_has_empty_body():
    t = parse_theory("vocab { pred p/0, q/0. } define p, q { p <- true. }")
    s = Structure([], predicates={"p": {}, "q": {}}, arities={"p": 0, "q": 0})
    lg = ground_literal_oracle(t.definitions[0], s, relevant_only=False)
    assert (GroundAtom("p", ()), frozenset()) in lg.rules
    assert len(lg.rules) == 9  # every consistent literal set over {p, q}
    assert all(not any((a, True) in b and (a, False) in b for a, _ in b) for _, b in lg.rules)


def test_literal_oracle_matches_hand_grounding(load):
    t, s = load("even-cycle.idl", "even-cycle.struct")
    lg = ground_literal_oracle(t.definitions[0], s)
    d0, d1 = GroundAtom("even", ("d0",)), GroundAtom("even", ("d1",))
    assert set(lg.rules) == {(d0, frozenset()), (d1, frozenset({(d0, False)})), (d1, frozenset({(d1, False)}))}


def test_relevant_and_full_oracles_agree():
    for case in random_corpus(5, 40, max_atoms=5):
        a = literal_well_founded_model(ground_literal_oracle(case.definition, case.structure))
        b = literal_well_founded_model(ground_literal_oracle(case.definition, case.structure, relevant_only=False))
        assert a.restrict_equal(b, case.definition.defined)


def test_rule_cap():
    t = parse_theory("vocab { pred p/3. } define p { p(X, Y, Z). }")
    s = Structure([f"d{i}" for i in range(5)], predicates={"p": {}}, arities={"p": 3})
    with pytest.raises(LimitExceeded):
        ground_definition(t.definitions[0], s, max_rules=100)


def test_ground_sentence_examples():
    v = Vocabulary(predicates={"U": 1, "male": 1, "female": 1})
    s = Structure(["a", "b"], predicates={p: {} for p in v.predicates}, arities=dict(v.predicates))
    u = lambda e: Atom("U", (Elem(e),))  # noqa: E731
    assert ground_sentence(parse_formula("! X : U(X)", v), s) == And((u("a"), u("b")))
    assert eval_formula(ground_sentence(parse_formula("? X : false", v), s), s) is TruthValue.FALSE
    one = Structure(["a"], predicates={p: {} for p in v.predicates}, arities=dict(v.predicates))
    assert str(ground_sentence(parse_formula("! X : male(X) <=> ~female(X)", v), one)) == str(
        parse_formula("male(@a) <=> ~female(@a)", v)
    )


def test_ground_sentence_preserves_value():
    rng = random.Random(8)
    v = Vocabulary({"c"}, {}, {"p": 0, "q": 1, "r": 2})
    for _ in range(300):
        s = random_structure(rng, v, rng.randint(1, 3), total=set(v.predicates))
        s = s.with_values({a: TruthValue.UNKNOWN for a in s.atoms() if rng.random() < 0.3})
        f = random_body(rng, dict(v.predicates), [], 3)
        assert eval_formula(ground_sentence(f, s), s) is eval_formula(f, s)

import random

import pytest
from hypothesis import given, settings, strategies as st

from idlogic.errors import ArityError, ParseError, SyntaxModelError, UndeclaredSymbolError
from idlogic.parser import parse_formula, parse_theory, render_formula, render_theory
from idlogic.randgen import random_body, random_definition
from idlogic.syntax import (
    TRUE,
    And,
    App,
    Atom,
    Const,
    Definition,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Rule,
    Theory,
    Var,
    Vocabulary,
    alpha_equivalent,
    free_vars,
)

EVEN = "vocab { const 0. func s/1. pred even/1. } define even { even(0). even(s(X)) <- ~even(X). }"


def test_parse_even_definition():
    t = parse_theory(EVEN)
    (d,) = t.definitions
    assert d.defined == ("even",)
    assert len(d.rules) == 2
    assert d.rules[0] == Rule("even", (Const("0"),), TRUE)
    assert d.rules[1] == Rule("even", (App("s", (Var("X"),)),), Not(Atom("even", (Var("X"),))))


def test_parse_empty_theory():
    for text in ("", "vocab { }"):
        t = parse_theory(text)
        assert t.sentences == () and t.definitions == ()


def test_parse_family_three_definitions(load):
    t = load("family3.idl")
    assert [d.defined for d in t.definitions] == [("father",), ("mother",), ("parent",)]


def test_render_sentence():
    t = Theory(Vocabulary(predicates={"U": 1}), (Forall("X", Atom("U", (Var("X"),))),))
    assert "axiom ! X : U(X)." in render_theory(t)


def test_render_empty_theory():
    assert render_theory(Theory()).strip() == "vocab { }"


def test_render_simultaneous_definition():
    text = "vocab { const 0. func s/1. pred even/1, odd/1. } define even, odd { even(0). odd(s(X)) <- even(X). even(s(X)) <- odd(X). }"
    out = render_theory(parse_theory(text))
    assert "define even, odd {" in out
    assert out.count("define") == 1


def test_free_vars():
    p = lambda *a: Atom("p", tuple(Var(x) for x in a))  # noqa: E731
    q = Atom("q", (Var("x"), Var("y")))
    assert free_vars(And((p("x"), Exists("y", q)))) == {"x"}
    assert free_vars(Forall("x", p("x"))) == frozenset()
    assert free_vars(Not(Atom("even", (Var("X"),)))) == {"X"}


def test_precedence():
    f = parse_formula("~p & q | r => s <=> t")
    p, q, r, s, t = (Atom(n) for n in "pqrst")
    assert f == Iff(Implies(Or((And((Not(p), q)), r)), s), t)
    assert parse_formula("p => q => r") == Implies(Atom("p"), Implies(Atom("q"), Atom("r")))


def test_quantifier_scope_extends_right():
    f = parse_formula("! X : p(X) & q(X)")
    assert isinstance(f, Forall) and isinstance(f.body, And)


def test_syntax_errors_report_position():
    with pytest.raises(ParseError) as e:
        parse_theory("vocab { pred p/0. }\ndefine p { p <- & . }")
    assert (e.value.line, e.value.column) == (2, 17)


def test_arity_and_undeclared_symbols():
    with pytest.raises(ArityError):
        parse_theory("vocab { const a, b. pred p/1. } axiom p(a, b).")
    with pytest.raises(UndeclaredSymbolError):
        parse_theory("vocab { pred p/1. } axiom q.")


def test_rule_head_must_be_defined_in_block():
    with pytest.raises(ParseError):
        parse_theory("vocab { pred p/0, q/0. } define p { q. }")


def test_definition_invariant():
    with pytest.raises(SyntaxModelError):
        Definition((), (Rule("p", ()),))
    with pytest.raises(SyntaxModelError):
        Vocabulary(constants={"a"}, predicates={"a": 0})


def test_sentences_must_be_closed():
    t = Theory(Vocabulary(predicates={"p": 1}), (Atom("p", (Var("X"),)),))
    with pytest.raises(SyntaxModelError):
        t.validate()


def test_round_trip_random_theories():
    rng = random.Random(11)
    for _ in range(300):
        d, v = random_definition(rng, rng.randint(1, 3))
        sentence = random_body(rng, dict(v.predicates), [], 3)
        t = Theory(v, (sentence,), (d,))
        assert parse_theory(render_theory(t)) == t


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip_formulas(seed):
    rng = random.Random(seed)
    f = random_body(rng, {"p": 0, "q": 1, "r": 2}, ["X", "Y"], 4)
    v = Vocabulary({"c"}, {}, {"p": 0, "q": 1, "r": 2})
    assert parse_formula(render_formula(f), v) == f


def test_alpha_equivalence():
    a = parse_formula("! X : p(X)", Vocabulary(predicates={"p": 1}))
    b = parse_formula("! Y : p(Y)", Vocabulary(predicates={"p": 1}))
    assert a != b and alpha_equivalent(a, b)


def test_comments_and_denials():
    t = parse_theory("vocab { pred p/0, q/0. } // a comment\n<- p & q.")
    assert t.sentences == (Not(And((Atom("p"), Atom("q")))),)

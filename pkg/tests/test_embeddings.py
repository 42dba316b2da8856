import pytest

from idlogic.embeddings import (
    AbductiveFramework,
    DeductiveDatabase,
    Effect,
    FluentSpec,
    build_frame_definition,
    dca_una,
    frame_theory,
    import_abductive,
    import_deductive_db,
    import_logic_program,
    parse_abductive,
    parse_deductive_db,
    parse_fluent_spec,
    parse_logic_program,
    table_definition,
    una_is_exact,
)
from idlogic.engine import enumerate_models
from idlogic.errors import EmbeddingError
from idlogic.parser import parse_formula, render_formula, render_rule, render_theory
from idlogic.structures import Structure
from idlogic.syntax import Const, Vocabulary

from conftest import corpus


def test_logic_program_import():
    rules, v = parse_logic_program("p(X) <- q(X) & ~r(X). r(a).")
    (d,) = import_logic_program(rules, v).definitions
    assert d.defined == ("p", "r") and len(d.rules) == 2
    empty = import_logic_program([])
    assert empty.definitions == () and empty.sentences == ()


def test_abductive_import():
    fw = parse_abductive("abducible q. p <- q. constraint p. <- r.")
    t = import_abductive(fw)
    assert t.definitions[0].defined == ("p", "r")
    assert [render_formula(f) for f in t.sentences] == ["p", "~r"]
    s = Structure([], predicates={x: {} for x in "pqr"}, arities={x: 0 for x in "pqr"})
    (m,) = enumerate_models(t, s)  # the only explanation of p is q
    assert [str(a) for a in m.true_atoms("pqr")] == ["p", "q"]
    with pytest.raises(EmbeddingError):
        parse_abductive("abducible q. q <- p.")


def test_abductive_constraints_only():
    fw = AbductiveFramework({"q"}, [], [parse_formula("q | p")], Vocabulary(predicates={"p": 0, "q": 0}))
    t = import_abductive(fw)
    s = Structure([], predicates={"p": {}, "q": {}}, arities={"p": 0, "q": 0})
    # p has no rules, so it is false and the constraint forces the abducible q
    assert [str(a) for m in enumerate_models(t, s) for a in m.true_atoms(["p", "q"])] == ["q"]


def test_table_definition():
    d = table_definition("edge", [("a", "b"), ("b", "c")])
    assert [render_rule(r) for r in d.rules] == ["edge(a, b).", "edge(b, c)."]
    with pytest.raises(EmbeddingError):
        table_definition("edge", [("a",), ("a", "b")])


def test_deductive_db_import():
    db, v = parse_deductive_db(corpus("ddb-network.ddb"))
    t = import_deductive_db(db, v)
    assert [d.defined for d in t.definitions] == [("physical_connection",), ("connected",), ("U",)]
    names = ["c1", "c2", "c3", "c4"]
    s = Structure(names, constants={c: c for c in names}, predicates={p: {} for p in t.vocabulary.predicates},
                  arities=dict(t.vocabulary.predicates))
    (m,) = enumerate_models(t, s)
    reach = {a.args[1] for a in m.true_atoms(["connected"]) if a.args[0] == "c4"}
    assert reach == set() and len(m.true_atoms(["connected"])) == 12
    bigger = Structure(names + ["e"], constants={c: c for c in names}, predicates={p: {} for p in t.vocabulary.predicates},
                       arities=dict(t.vocabulary.predicates))
    assert list(enumerate_models(t, bigger)) == []
    with pytest.raises(EmbeddingError):
        DeductiveDatabase({"p": [("a",)]}, parse_logic_program("p(X) <- q(X).")[0])


def test_dca_una_shapes():
    t = dca_una(Vocabulary({"a", "b"}, {}, {}))
    assert render_theory(t).count("!=") == 1 and "! X1 : U(X1)" in render_theory(t)
    assert una_is_exact(Vocabulary({"a"}, {}, {}))
    peano = dca_una(Vocabulary({"z"}, {"s": 1}, {}), una_depth=2)
    assert [render_rule(r) for r in peano.definitions[0].rules] == ["U(z).", "U(s(X1)) <- U(X1)."]
    assert [render_formula(f) for f in peano.sentences[1:]] == ["z != s(z)", "z != s(s(z))", "s(z) != s(s(z))"]
    assert not una_is_exact(Vocabulary({"z"}, {"s": 1}, {}))
    assert dca_una(Vocabulary({"U"}, {}, {})).definitions[0].defined == ("U_1",)


FLIP = FluentSpec("on", ("L",), (Effect(Const("flip"), ("L",), parse_formula("~on(L, S)")),),
                  (Effect(Const("flip"), ("L",), parse_formula("on(L, S)")),))


def test_frame_definition_rules():
    d = build_frame_definition([FLIP])
    assert [render_rule(r) for r in d.rules] == [
        "on(L, s0) <- initially_on(L).",
        "on(L, do(A, S)) <- cause_on(A, S, L).",
        "on(L, do(A, S)) <- on(L, S) & ~cause_not_on(A, S, L).",
        "cause_on(flip, S, L) <- ~on(L, S).",
        "cause_not_on(flip, S, L) <- on(L, S).",
    ]
    assert d.defined == ("on", "cause_on", "cause_not_on")


def test_frame_definition_with_preconditions():
    poss = parse_logic_program("poss(A, S) <- A = flip.")[0]
    d = build_frame_definition([FLIP], guards=("situation", "action"), poss_rules=poss)
    succ = [render_rule(r) for r in d.rules if r.head_pred == "on"][1:]
    assert succ == [
        "on(L, do(A, S)) <- situation(S) & action(A) & cause_on(A, S, L) & poss(A, S).",
        "on(L, do(A, S)) <- situation(S) & action(A) & on(L, S) & ~cause_not_on(A, S, L) & poss(A, S).",
        "on(L, do(A, S)) <- situation(S) & action(A) & on_o(L, do(A, S)) & ~poss(A, S).",
    ]
    assert "poss" in d.defined
    assert frame_theory([FLIP], poss_rules=poss).vocabulary.predicates["on_o"] == 2


@pytest.mark.parametrize(
    "condition",
    ["on(L, do(flip, S))", "on(L, s0)", "S = S", "? S : on(L, S)", "lamp(S)", "cause_on(other, S, L)"],
)
def test_effect_condition_restrictions(condition):
    bad = FluentSpec("on", ("L",), (Effect(Const("flip"), ("L",), parse_formula(condition)),))
    with pytest.raises(EmbeddingError):
        build_frame_definition([bad])


def test_fluent_file():
    ff = parse_fluent_spec(corpus("sitcalc-suitcase.fluents"))
    assert [f.name for f in ff.fluents] == ["up", "opened"]
    assert ff.constants == ["l1", "l2"] and ff.guards == ("situation", "action")
    t = ff.theory()
    assert t.definitions[0].defined[:3] == ("up", "cause_up", "cause_not_up")
    assert len(t.sentences) == 2

import random

from idlogic.analysis import (
    check_relativized,
    check_well_defining,
    check_well_founded,
    classify,
    dependency_graph,
    is_hierarchy,
    split_theory,
    strata,
)
from idlogic.engine import enumerate_models, justified_extension
from idlogic.parser import parse_theory
from idlogic.randgen import random_corpus
from idlogic.structures import Structure, TruthValue
from idlogic.syntax import Definition


def defn(text: str, i: int = 0):
    return parse_theory(text).definitions[i]


PQ = "vocab { pred p/0, q/0, r/0, o/0. } "


def test_dependency_graph_signs():
    d = defn(PQ + "define p, q { p <- ~q & o. q <- p | (r <=> q). }")
    assert dependency_graph(d).edges == {("q", "p", "-"), ("p", "q", "+"), ("q", "q", "+"), ("q", "q", "-")}


def test_classify_examples(load):
    assert classify(defn(PQ + "define p { p <- o. }")).flags() == ["non-recursive", "positive-recursive", "stratified"]
    assert classify(defn(PQ + "define p { p <- p | o. }")).flags() == ["positive-recursive", "stratified"]
    assert classify(defn(PQ + "define p, q { p <- ~q. q <- o. }")).flags() == ["stratified"]
    assert classify(defn(PQ + "define p { p <- ~p. }")).flags() == ["unclassified"]
    assert classify(defn(PQ + "define p { p <- p => o. }")).flags() == ["unclassified"]
    assert classify(load("family-merged.idl").definitions[0]).positive_recursive


def test_strata_order():
    d = defn(PQ + "define r, q, p { p <- ~q. q <- ~r & q. r <- o. }")
    assert strata(d) == [["r"], ["q"], ["p"]]
    assert strata(defn(PQ + "define p, q { p <- ~q. q <- p. }")) is None


def test_classify_ignores_rule_order():
    for case in random_corpus(3, 100):
        d = case.definition
        rules = list(d.rules)
        random.Random(0).shuffle(rules)
        assert classify(d).flags() == classify(Definition(d.defined[::-1], tuple(rules))).flags()


def test_relativized_shape():
    text = "vocab { pred lt/2, ok/1, win/1. } define win { win(X) <- ! Z : lt(Z, X) => ~win(Z) & ok(X). }"
    assert check_relativized(defn(text), "lt")
    bad = "vocab { pred lt/2, win/1. } define win { win(X) <- ? Z : lt(X, Z) & ~win(Z). }"
    assert not check_relativized(defn(bad), "lt")
    loose = "vocab { pred lt/2, win/1. } define win { win(X) <- ~win(X). }"
    assert not check_relativized(defn(loose), "lt")
    assert classify(defn(text), "lt").flags() == ["relativized(lt)"]


def test_well_founded_examples(load):
    t, s = load("evenodd-two-defs.idl", "chain3.struct")
    r = check_well_founded(t.definitions[1], s)
    # d2 is its own successor's successor, so even(d2) depends on itself
    assert not r.ok and [str(a) for a in r.stuck] == ["even(d2)"]
    game = defn("vocab { pred lt/2, win/1. } define win { win(X) <- ! Z : lt(Z, X) => ~win(Z). }")
    lt = {(a, b): TruthValue(2 * (a < b)) for a in "xyz" for b in "xyz"}
    order = Structure(list("xyz"), predicates={"lt": lt, "win": {}}, arities={"lt": 2, "win": 1})
    r = check_well_founded(game, order)
    assert r.ok and [[str(a) for a in layer] for layer in r.layers] == [["win(x)"], ["win(y)"], ["win(z)"]]
    t, s = load("even-cycle.idl", "even-cycle.struct")
    r = check_well_founded(t.definitions[0], s)
    assert not r.ok and [str(a) for a in r.stuck] == ["even(d1)"]
    assert check_well_founded(Definition(("p",), ()), Structure(["a"], predicates={"p": {}}, arities={"p": 1})).ok


def test_well_founded_implies_total():
    for case in random_corpus(13, 150):
        if check_well_founded(case.definition, case.structure):
            assert justified_extension(case.definition, case.structure).is_total(case.definition.defined)


def test_class_soundness():
    # stratified definitions are total on every total open structure
    seen = 0
    for case in random_corpus(17, 200):
        if classify(case.definition).stratified:
            seen += 1
            assert justified_extension(case.definition, case.structure).is_total(case.definition.defined)
    assert seen > 30


def test_well_defining():
    d = defn(PQ + "define p { p <- ~p. }")
    s = Structure([], predicates={"p": {}}, arities={"p": 0})
    ok, witness = check_well_defining(d, [s])
    assert not ok and witness[next(iter(s.atoms(["p"])))] is TruthValue.UNKNOWN
    guarded = defn(PQ + "define p { p <- o & ~p. }")
    opens = [Structure([], predicates={"o": {(): v}, "p": {}}, arities={"p": 0}) for v in (TruthValue.TRUE, TruthValue.FALSE)]
    assert check_well_defining(guarded, opens)[0] is False
    assert check_well_defining(guarded, opens[1:]) == (True, None)


def test_split_examples(load):
    assert split_theory(load("family3.idl"), singletons=True) is None
    assert len(split_theory(load("family3.idl"))) == 1
    t = parse_theory(PQ + "define q { q <- p. } define p { p <- o. } axiom q | p.")
    parts = split_theory(t, singletons=True)
    assert [p.definitions[0].defined for p in parts] == [("p",), ("q",)]
    assert [len(p.sentences) for p in parts] == [0, 1]
    assert len(split_theory(parse_theory(PQ + "axiom o."))) == 1


def test_split_preserves_models(load):
    t = parse_theory(PQ + "define q { q <- ~p. } define p { p <- o. } axiom q | r.")
    s = Structure([], predicates={x: {} for x in "pqro"}, arities={x: 0 for x in "pqro"})
    whole = set(enumerate_models(t, s))
    parts = split_theory(t)
    assert len(whole) == 3
    for m in whole:
        assert all(set(enumerate_models(p, m)) == {m} for p in parts)


def test_hierarchy(load):
    assert not is_hierarchy(load("family3.idl").definitions)
    assert not is_hierarchy(load("evenodd-two-defs.idl").definitions)
    t = parse_theory(PQ + "define q { q <- p. } define p { p <- o. }")
    assert is_hierarchy(t.definitions)

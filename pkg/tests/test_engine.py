import itertools
import random

import pytest

from idlogic.engine import (
    CompiledDefinition,
    check,
    enumerate_models,
    enumerate_models_naive,
    is_justified,
    is_model,
    justified_extension,
    literal_well_founded_model,
    stable_operator,
    well_founded_state,
)
from idlogic.errors import LimitExceeded, NotTotalError
from idlogic.grounder import ground_definition, ground_literal_oracle
from idlogic.parser import parse_theory
from idlogic.randgen import random_corpus
from idlogic.structures import GroundAtom, Structure, TruthValue, precision_leq
from idlogic.syntax import Definition, Theory

T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNKNOWN


def prop(text: str):
    t = parse_theory(text)
    s = Structure([], predicates={p: {} for p in t.vocabulary.predicates}, arities=dict(t.vocabulary.predicates))
    return t, s


def wfm_values(text: str) -> dict:
    t, s = prop(text)
    w = justified_extension(t.definitions[0], s)
    return {a.pred: w[a] for a in w.atoms(t.definitions[0].defined)}


def test_stable_operator_examples():
    assert wfm_values("vocab { pred p/0. } define p { p <- true. }") == {"p": T}
    t, s = prop("vocab { pred p/0. } define p { p <- p. }")
    g = ground_definition(t.definitions[0], s)
    for v in (T, F, U):
        out = stable_operator(g, s.with_values({GroundAtom("p", ()): v}))
        assert out[GroundAtom("p", ())] is F
    assert wfm_values("vocab { pred p/0, q/0. } define p, q { p <- ~q. q <- ~p. }") == {"p": U, "q": U}


def test_wfm_examples(load):
    assert wfm_values("vocab { pred p/0. } define p { p <- p | ~p. }") == {"p": U}
    t, s = load("even-cycle.idl", "even-cycle.struct")
    w = justified_extension(t.definitions[0], s)
    assert w[GroundAtom("even", ("d0",))] is T and w[GroundAtom("even", ("d1",))] is U


def test_inconsistent_body_never_fires():
    # no consistent literal set makes q & ~q true, so p is simply false
    assert wfm_values("vocab { pred p/0, q/0. } define p, q { p <- q & ~q. }") == {"p": F, "q": F}
    assert wfm_values("vocab { pred p/0, q/0. } define p, q { q <- ~p & p. p <- q => q. }") == {"p": T, "q": F}


def test_is_justified_examples(load):
    t, s = prop("vocab { pred p/0. } define p { p <- true. }")
    d = t.definitions[0]
    assert is_justified(d, s.with_values({GroundAtom("p", ()): T}))
    assert not is_justified(d, s.with_values({GroundAtom("p", ()): F}))
    merged, fam = load("family-merged.idl", "family.struct")
    empty = fam.with_values({a: F for a in fam.atoms(["father", "mother", "parent"])})
    assert is_justified(merged.definitions[0], empty)


def test_is_model_examples(load):
    t, s = load("family3.idl", "family.struct")
    assert is_model(t, s)
    merged = load("family-merged.idl")
    assert not is_model(merged, s)
    never = parse_theory("vocab { pred p/0. } axiom false.")
    for v in (T, F):
        assert not is_model(never, Structure([], predicates={"p": {(): v}}))
    with pytest.raises(NotTotalError):
        is_model(t, s.with_values({GroundAtom("male", ("adam",)): U}))


def test_check_verdicts(load):
    t, s = load("even-cycle.idl", "even-cycle.struct")
    partial = justified_extension(t.definitions[0], s)
    assert check(t, partial).status == "PARTIAL"
    assert check(t, s.with_values({a: T for a in s.atoms(["even"])})).status == "NOT-MODEL"
    lenient = parse_theory("vocab { pred p/0, q/0. } define p { p <- p | ~p. } axiom p | q.")
    s2 = Structure([], predicates={"p": {}, "q": {(): F}}, arities={"p": 0})
    assert check(lenient, s2).status == "NOT-MODEL"
    assert check(lenient, s2, strict=False).status == "PARTIAL"


def test_justified_extension_examples(load):
    t, s = load("evenodd-two-defs.idl", "chain3.struct")
    second = justified_extension(t.definitions[1], s)
    assert [str(a) for a in second.true_atoms(["even"])] == ["even(d0)", "even(d2)"]
    zero = Definition(("p",), ())
    s0 = Structure(["a", "b"], predicates={"p": {}}, arities={"p": 1})
    assert all(justified_extension(zero, s0)[a] is F for a in s0.atoms(["p"]))
    odd = s.with_values({GroundAtom("odd", ("d1",)): T, GroundAtom("odd", ("d0",)): F, GroundAtom("odd", ("d2",)): F})
    first = justified_extension(t.definitions[0], odd)
    assert [str(a) for a in first.true_atoms(["even"])] == ["even(d0)", "even(d2)"]


def test_fixpoint_and_trace_monotone():
    for case in random_corpus(31, 60):
        g = ground_definition(case.definition, case.structure)
        state = well_founded_state(g)
        assert stable_operator(g, state.current) == state.current
        for a, b in zip(state.trace, state.trace[1:]):
            assert precision_leq(a, b)


def test_least_precision_among_fixpoints():
    checked = 0
    for case in random_corpus(41, 80, max_atoms=6):
        c = CompiledDefinition(ground_definition(case.definition, case.structure))
        w = c.well_founded()
        for values in itertools.product((0, 1, 2), repeat=len(c.atoms)):
            values = list(values)
            if c.stable_revision(values) == values:
                checked += 1
                assert all(a == 1 or a == b for a, b in zip(w, values))
    assert checked >= 80


def test_order_independence():
    for case in random_corpus(51, 60):
        d = case.definition
        rules = list(d.rules)
        random.Random(2).shuffle(rules)
        a = justified_extension(d, case.structure)
        b = justified_extension(Definition(tuple(reversed(d.defined)), tuple(rules)), case.structure)
        assert a == b


def test_engine_matches_literal_oracle():
    for case in random_corpus(61, 150):
        w = justified_extension(case.definition, case.structure)
        o = literal_well_founded_model(ground_literal_oracle(case.definition, case.structure))
        assert w.restrict_equal(o, case.definition.defined)


def test_engine_matches_oracle_with_partial_open_part():
    rng = random.Random(71)
    for case in random_corpus(71, 150):
        s = case.structure
        opens = sorted(set(case.vocabulary.predicates) - set(case.definition.defined))
        s = s.with_values({a: U for a in s.atoms(opens) if rng.random() < 0.4})
        w = justified_extension(case.definition, s)
        o = literal_well_founded_model(ground_literal_oracle(case.definition, s))
        assert w.restrict_equal(o, case.definition.defined)


def test_enumerate_examples(load):
    t, s = load("evenodd-two-defs.idl", "chain3.struct")
    assert len(list(enumerate_models(t, s))) == 1
    assert len(list(enumerate_models_naive(t, s))) == 1
    never = parse_theory("vocab { pred p/0. } axiom false.")
    assert list(enumerate_models(never, Structure([], predicates={"p": {}}, arities={"p": 0}))) == []


def test_enumerate_dca_two_constants():
    t = parse_theory("vocab { const a, b. pred U/1. } define U { U(a). U(b). } axiom ! X : U(X). axiom a != b.")
    found = []
    for ca, cb in itertools.product(("d0", "d1"), repeat=2):
        s = Structure(["d0", "d1"], constants={"a": ca, "b": cb}, predicates={"U": {}}, arities={"U": 1})
        found += list(enumerate_models(t, s))
    assert len(found) == 2
    for m in found:
        assert m.constants["a"] != m.constants["b"] and len(m.true_atoms(["U"])) == 2


def test_search_matches_generate_and_test():
    for case in random_corpus(81, 60, max_atoms=6):
        t = Theory(case.vocabulary, (), (case.definition,))
        assert set(enumerate_models(t, case.structure)) == set(enumerate_models_naive(t, case.structure))


def test_search_with_open_unknowns_and_sentences():
    t = parse_theory("vocab { pred o/1, p/1. } define p { p(X) <- ~o(X). } axiom ? X : p(X).")
    s = Structure(["a", "b"], predicates={"o": {}, "p": {}}, arities={"o": 1, "p": 1})
    fast = list(enumerate_models(t, s))
    assert set(fast) == set(enumerate_models_naive(t, s))
    assert len(fast) == 3


def test_search_cap():
    t = parse_theory("vocab { pred o/1. }")
    s = Structure([f"d{i}" for i in range(8)], predicates={"o": {}}, arities={"o": 1})
    with pytest.raises(LimitExceeded):
        list(enumerate_models(t, s, max_nodes=50))

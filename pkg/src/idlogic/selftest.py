"""Self-test: replay the bundled corpus and cross-check the engine against the literal-grounding oracle."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .analysis import split_theory
from .embeddings import import_deductive_db, parse_deductive_db, parse_fluent_spec
from .engine import check, enumerate_models, enumerate_models_naive, justified_extension, literal_well_founded_model
from .grounder import ground_literal_oracle
from .errors import IDLogicError
from .parser import parse_theory
from .randgen import random_corpus
from .structures import Structure, TruthValue, parse_structure
from .syntax import Theory


@dataclass
class Outcome:
    name: str
    ok: bool
    detail: str = ""


def corpus_text(name: str) -> str:
    return resources.files("idlogic").joinpath("corpus").joinpath(name).read_text()


def corpus_files() -> list:
    return sorted(p.name for p in resources.files("idlogic").joinpath("corpus").iterdir() if p.name != "manifest.json")


def manifest() -> dict:
    return json.loads(corpus_text("manifest.json"))


def sequential_wfm(t, s: Structure, max_rules: int) -> Structure:
    """Justified extensions of the definitions applied in hierarchy order."""
    parts = split_theory(t, singletons=True)
    if parts is None:
        raise IDLogicError("definitions depend on each other cyclically; use check or models instead")
    s = s.check_vocabulary(t.vocabulary)
    for part in parts:
        for d in part.definitions:
            s = justified_extension(d, s, max_rules)
    return s


def literal_lists(s: Structure, preds) -> dict:
    out: dict = {"true": [], "false": [], "unknown": []}
    for a in s.atoms(sorted(preds)):
        out[{TruthValue.TRUE: "true", TruthValue.FALSE: "false", TruthValue.UNKNOWN: "unknown"}[s[a]]].append(str(a))
    return out


def herbrand_template(t) -> Structure:
    """Domain = the constants, each naming itself; every predicate unknown."""
    consts = sorted(t.vocabulary.constants)
    return Structure.for_vocabulary(t.vocabulary, consts, {c: c for c in consts})


def _run_entry(entry: dict, max_rules: int, max_nodes: int) -> Outcome:
    name, run, files, expect = entry["name"], entry["run"], entry["files"], entry["expect"]
    texts = [corpus_text(f) for f in files]
    if run == "check":
        v = check(parse_theory(texts[0]), parse_structure(texts[1]), max_rules)
        return Outcome(name, v.status == expect["status"], f"{v.status} {v.reason}".strip())
    if run == "wfm":
        t = parse_theory(texts[0])
        w = sequential_wfm(t, parse_structure(texts[1]), max_rules)
        got = literal_lists(w, t.defined_predicates())
        return Outcome(name, got == expect, json.dumps(got, sort_keys=True))
    if run in ("models", "ddb"):
        if run == "models":
            t = parse_theory(texts[0])
            template = parse_structure(texts[1])
        else:
            db, _ = parse_deductive_db(texts[0])
            t = import_deductive_db(db)
            template = herbrand_template(t)
        models = list(enumerate_models(t, template, max_nodes, max_rules))
        ok = len(models) == expect["count"]
        if ok and "true" in expect:
            ok = all([str(a) for a in m.true_atoms(sorted(t.vocabulary.predicates))] == expect["true"] for m in models)
        if ok and "true_count" in expect:
            ok = all(len(m.true_atoms([p])) == n for m in models for p, n in expect["true_count"].items())
        return Outcome(name, ok, f"{len(models)} model(s)")
    if run == "sitcalc":
        spec = parse_fluent_spec(texts[0])
        t = spec.theory()
        w = sequential_wfm(t, parse_structure(texts[1]), max_rules)
        got = literal_lists(w, [f.name for f in spec.fluents])
        ok = all(set(expect[k]) <= set(got[k]) for k in expect)
        return Outcome(name, ok, f"true fluents: {', '.join(got['true'])}")
    return Outcome(name, False, f"unknown run kind {run!r}")


def run_corpus(max_rules: int = 10**6, max_nodes: int = 10**6) -> list:
    m = manifest()
    outcomes = []
    covered = set()
    for entry in m["entries"]:
        covered |= set(entry["files"])
        try:
            outcomes.append(_run_entry(entry, max_rules, max_nodes))
        except IDLogicError as e:
            outcomes.append(Outcome(entry["name"], False, f"error: {e}"))
    missing = sorted(set(corpus_files()) - covered)
    outcomes.append(Outcome("corpus-coverage", not missing, f"unexercised: {missing}" if missing else ""))
    return outcomes


def run_oracle(seed: int, count: int = 200, max_rules: int = 10**6) -> Outcome:
    """Engine vs. literal-grounding oracle on ``count`` random definitions."""
    for i, case in enumerate(random_corpus(seed, count)):
        d, s = case.definition, case.structure
        w = justified_extension(d, s, max_rules)
        o = literal_well_founded_model(ground_literal_oracle(d, s, max_rules))
        if not w.restrict_equal(o, d.defined):
            return Outcome("oracle-equivalence", False, f"case {i} (seed {seed}) disagrees")
    return Outcome("oracle-equivalence", True, f"{count} random definitions, seed {seed}")


def run_search(seed: int, count: int = 30, max_nodes: int = 10**6) -> Outcome:
    """Depth-first model search vs. generate-and-test on small random definitions."""

    for i, case in enumerate(random_corpus(seed + 1, count, max_atoms=6)):
        t = Theory(case.vocabulary, (), (case.definition,))
        template = case.structure
        fast = list(enumerate_models(t, template, max_nodes))
        slow = list(enumerate_models_naive(t, template, max_nodes))
        if set(fast) != set(slow):
            return Outcome("search-vs-naive", False, f"case {i} (seed {seed}) disagrees")
    return Outcome("search-vs-naive", True, f"{count} random theories, seed {seed}")


def run_selftest(seed: int = 0, count: int = 200, max_rules: int = 10**6, max_nodes: int = 10**6) -> list:
    return run_corpus(max_rules, max_nodes) + [run_oracle(seed, count, max_rules), run_search(seed, max_nodes=max_nodes)]

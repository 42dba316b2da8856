"""Seeded generators of small random definitions, theories and structures.

Everything is drawn from a ``random.Random`` so a seed reproduces a corpus
exactly.  Sizes stay desk-scale: at most three defined predicates, four
rules, domains of at most three elements and twelve defined ground atoms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .structures import Structure, TruthValue
from .syntax import (
    TRUE,
    And,
    Atom,
    Const,
    Definition,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Rule,
    Theory,
    Truth,
    Var,
    Vocabulary,
)

DEFINED_NAMES = ("p", "q", "r")
OPEN_NAMES = ("a", "b")
CONSTANT = "c"


@dataclass
class RandomCase:
    definition: Definition
    vocabulary: Vocabulary
    structure: Structure  # open predicates total, defined predicates unknown


def _arities(rng: random.Random, count: int, domain_size: int, max_atoms: int) -> list:
    while True:
        ar = [rng.choice((0, 1, 1, 1, 2)) for _ in range(count)]
        if sum(domain_size**n for n in ar) <= max_atoms:
            return ar


def _term(rng: random.Random, scope: list, with_constant: bool):
    if scope and (not with_constant or rng.random() < 0.8):
        return Var(rng.choice(scope))
    return Const(CONSTANT)


def random_body(
    rng: random.Random,
    preds: dict,
    scope: list,
    depth: int = 2,
    with_constant: bool = True,
    fresh: list | None = None,
) -> Formula:
    """A random formula over ``preds`` whose free variables are among ``scope``."""
    fresh = fresh if fresh is not None else [0]
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        roll = rng.random()
        if roll < 0.05:
            return Truth(rng.random() < 0.5)
        if roll < 0.12 and (scope or with_constant):
            return Eq(_term(rng, scope, with_constant), _term(rng, scope, with_constant))
        name = rng.choice(sorted(preds))
        if not scope and not with_constant and preds[name] > 0:
            zero = [p for p, n in preds.items() if n == 0]
            if not zero:
                return Truth(rng.random() < 0.5)
            name = rng.choice(zero)
        return Atom(name, tuple(_term(rng, scope, with_constant) for _ in range(preds[name])))
    sub = lambda s=scope: random_body(rng, preds, s, depth - 1, with_constant, fresh)  # noqa: E731
    if roll < 0.5:
        return Not(sub())
    if roll < 0.7:
        return And((sub(), sub()))
    if roll < 0.85:
        return Or((sub(), sub()))
    if roll < 0.9:
        return Implies(sub(), sub()) if rng.random() < 0.7 else Iff(sub(), sub())
    fresh[0] += 1
    v = f"Z{fresh[0]}"
    return (Exists if rng.random() < 0.6 else Forall)(v, sub(scope + [v]))


def random_definition(
    rng: random.Random,
    domain_size: int,
    max_preds: int = 3,
    max_rules: int = 4,
    max_atoms: int = 12,
    depth: int = 2,
    defined_names=DEFINED_NAMES,
    open_preds: dict | None = None,
) -> tuple:
    """(Definition, Vocabulary) with 1..max_preds defined predicates."""
    count = rng.randint(1, min(max_preds, len(defined_names)))
    names = list(defined_names[:count])
    ar = _arities(rng, count, domain_size, max_atoms)
    defined = dict(zip(names, ar))
    if open_preds is None:
        open_preds = {o: rng.choice((0, 1)) for o in OPEN_NAMES[: rng.randint(0, len(OPEN_NAMES))]}
    preds = {**defined, **open_preds}
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head = rng.choice(names)
        head_vars = [f"X{i}" for i in range(defined[head])]
        args = tuple(Const(CONSTANT) if rng.random() < 0.1 else Var(v) for v in head_vars)
        scope = [a.name for a in args if isinstance(a, Var)]
        body = TRUE if rng.random() < 0.1 else random_body(rng, preds, scope, depth)
        rules.append(Rule(head, args, body))
    vocab = Vocabulary(frozenset({CONSTANT}), {}, preds)
    return Definition(tuple(names), tuple(rules)), vocab


def random_structure(
    rng: random.Random, vocabulary: Vocabulary, domain_size: int, total: frozenset | set = frozenset()
) -> Structure:
    """Elements d0..; constants mapped at random; predicates in ``total`` filled in at random."""
    domain = [f"d{i}" for i in range(domain_size)]
    constants = {c: rng.choice(domain) for c in sorted(vocabulary.constants)}
    s = Structure(domain, constants=constants, predicates={p: {} for p in vocabulary.predicates}, arities=dict(vocabulary.predicates))
    values = {}
    for a in s.atoms(sorted(total)):
        values[a] = TruthValue.TRUE if rng.random() < 0.5 else TruthValue.FALSE
    return s.with_values(values)


def random_case(rng: random.Random, domain_size: int | None = None, **kw) -> RandomCase:
    n = domain_size or rng.randint(1, 3)
    d, v = random_definition(rng, n, **kw)
    s = random_structure(rng, v, n, total=d.open_predicates() | (set(v.predicates) - set(d.defined)))
    return RandomCase(d, v, s)


def random_corpus(seed: int, count: int, **kw) -> list:
    rng = random.Random(seed)
    return [random_case(rng, **kw) for _ in range(count)]


def random_sentence(rng: random.Random, preds: dict, depth: int = 2) -> Formula:
    body = random_body(rng, preds, [], depth, with_constant=True)
    return body


def random_theory_pair(rng: random.Random, domain_size: int) -> tuple:
    """(T1, T2): T2 defines fresh predicates (possibly over T1's) and adds sentences over both."""
    d1, v1 = random_definition(rng, domain_size, max_preds=2, max_rules=3, max_atoms=6, defined_names=("p", "q"))
    s1 = [random_sentence(rng, dict(v1.predicates), 1) for _ in range(rng.randint(0, 1))]
    t1 = Theory(v1, tuple(s1), (d1,))
    d2, v2 = random_definition(
        rng, domain_size, max_preds=1, max_rules=2, max_atoms=3, defined_names=("r",), open_preds=dict(v1.predicates)
    )
    s2 = [random_sentence(rng, dict(v2.predicates), 1) for _ in range(rng.randint(0, 2))]
    t2 = Theory(v2, tuple(s2), (d2,))
    return t1, t2

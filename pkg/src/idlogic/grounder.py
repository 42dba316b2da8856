"""Instantiate definitions and sentences over a finite structure.

Two groundings are provided.  ``ground_definition`` keeps formula bodies (with
quantifiers expanded and terms reduced to domain elements) and is what the
engine evaluates.  ``ground_literal_oracle`` materializes the literal-set
rules ``head <- S_J`` for every partial model ``J`` of a body; it is
exponential and exists to cross-check the engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EvaluationError, LimitExceeded
from .parser import render_formula
from .structures import GroundAtom, Structure, TruthValue, eval_formula, eval_term, restrict_open
from .syntax import (
    And,
    Atom,
    Definition,
    Elem,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Meta,
    Not,
    Or,
    Term,
    Truth,
    conj,
    disj,
)

DEFAULT_MAX_RULES = 10**6


def render_ground_atom(a: GroundAtom) -> str:
    """Concrete syntax for a ground atom, elements written as ``@name``."""
    return render_formula(Atom(a.pred, tuple(Elem(e) for e in a.args)))


@dataclass(frozen=True)
class GroundRule:
    head: GroundAtom
    body: Formula

    def __str__(self) -> str:
        head = render_ground_atom(self.head)
        if self.body == Truth(True):
            return f"{head}."
        return f"{head} <- {render_formula(self.body)}."


@dataclass(frozen=True)
class GroundDefinition:
    defined_atoms: tuple
    rules: tuple
    base: Structure
    defined: tuple = ()

    def rules_for(self) -> dict:
        out: dict = {a: [] for a in self.defined_atoms}
        for r in self.rules:
            out[r.head].append(r)
        return out


@dataclass(frozen=True)
class LiteralGroundDefinition:
    """Propositional definition whose rule bodies are consistent literal sets.

    ``rules`` holds pairs ``(head, frozenset((atom, sign), ...))``.
    """

    defined_atoms: tuple
    rules: tuple
    base: Structure
    defined: tuple = ()

    def __str__(self) -> str:
        lines = []
        for head, body in self.rules:
            lits = ", ".join(
                ("" if sign else "~") + render_ground_atom(a) for a, sign in sorted(body, key=lambda l: (str(l[0]), l[1]))
            )
            lines.append(f"{render_ground_atom(head)} <- {{{lits}}}.")
        return "\n".join(lines)


def ground_term(t: Term, s: Structure, env: dict) -> Elem:
    return Elem(eval_term(t, s, env))


def ground_formula(f: Formula, s: Structure, env: dict | None = None) -> Formula:
    """Expand quantifiers over the domain and reduce every term to a domain element."""
    env = env or {}
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(ground_term(t, s, env) for t in f.args))
    if isinstance(f, Eq):
        return Eq(ground_term(f.left, s, env), ground_term(f.right, s, env))
    if isinstance(f, Truth):
        return f
    if isinstance(f, Not):
        return Not(ground_formula(f.body, s, env))
    if isinstance(f, And):
        return And(tuple(ground_formula(a, s, env) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(ground_formula(a, s, env) for a in f.args))
    if isinstance(f, Implies):
        return Implies(ground_formula(f.left, s, env), ground_formula(f.right, s, env))
    if isinstance(f, Iff):
        return Iff(ground_formula(f.left, s, env), ground_formula(f.right, s, env))
    if isinstance(f, Forall):
        return conj(ground_formula(f.body, s, {**env, f.var: d}) for d in s.domain)
    if isinstance(f, Exists):
        return disj(ground_formula(f.body, s, {**env, f.var: d}) for d in s.domain)
    if isinstance(f, Meta):
        raise EvaluationError(f"schematic variable ${f.name} cannot be grounded")
    raise TypeError(f"not a formula: {f!r}")


def ground_sentence(f: Formula, s: Structure) -> Formula:
    return ground_formula(f, s, {})


def _instances(d: Definition, s: Structure, max_rules: int):
    """Yield (rule, env, head atom) for every variable assignment of every rule."""
    count = 0
    for rule in d.rules:
        names = rule.variables
        for values in itertools.product(s.domain, repeat=len(names)):
            count += 1
            if count > max_rules:
                raise LimitExceeded(f"grounding exceeds {max_rules} rules")
            env = dict(zip(names, values))
            head = GroundAtom(rule.head_pred, tuple(eval_term(t, s, env) for t in rule.head_args))
            yield rule, env, head


def ground_definition(d: Definition, s: Structure, max_rules: int = DEFAULT_MAX_RULES) -> GroundDefinition:
    """Ground ``d`` over ``s``; the open part of ``s`` becomes the base interpretation."""
    s = s.with_predicates({})  # copy
    for p in d.defined:
        if p not in s.arities:
            raise EvaluationError(f"structure does not declare defined predicate {p}")
    base = restrict_open(s, d)
    rules = []
    for rule, env, head in _instances(d, base, max_rules):
        rules.append(GroundRule(head, ground_formula(rule.body, base, env)))
    rules.sort(key=lambda r: (base.atom_key(r.head), render_formula(r.body)))
    return GroundDefinition(tuple(base.atoms(d.defined)), tuple(rules), base, d.defined)


def _relevant_atoms(f: Formula, s: Structure, env: dict, defined: set, out: dict) -> None:
    if isinstance(f, Atom):
        if f.pred in defined:
            out.setdefault(GroundAtom(f.pred, tuple(eval_term(t, s, env) for t in f.args)), None)
    elif isinstance(f, Not):
        _relevant_atoms(f.body, s, env, defined, out)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _relevant_atoms(a, s, env, defined, out)
    elif isinstance(f, (Implies, Iff)):
        _relevant_atoms(f.left, s, env, defined, out)
        _relevant_atoms(f.right, s, env, defined, out)
    elif isinstance(f, (Forall, Exists)):
        for d in s.domain:
            _relevant_atoms(f.body, s, {**env, f.var: d}, defined, out)


def ground_literal_oracle(
    d: Definition,
    s: Structure,
    max_rules: int = DEFAULT_MAX_RULES,
    relevant_only: bool = True,
) -> LiteralGroundDefinition:
    """Literal-set grounding: ``head <- S_J`` for each partial model J of each instantiated body.

    Bodies are evaluated with the generic Kleene evaluator directly on the
    rule body and a variable assignment, so this path shares nothing with
    the engine's body compilation.

    With ``relevant_only`` (default) J ranges over three-valued assignments of
    the defined atoms that occur in the body; the full enumeration over all
    defined atoms only adds supersets of these bodies, which cannot change the
    well-founded model, and is available with ``relevant_only=False``.
    """
    s = s.with_predicates({})
    base = restrict_open(s, d)
    defined = set(d.defined)
    all_atoms = base.atoms(d.defined)
    values3 = (TruthValue.FALSE, TruthValue.UNKNOWN, TruthValue.TRUE)
    seen: set = set()
    rules = []
    emitted = 0
    for rule, env, head in _instances(d, base, max_rules):
        if relevant_only:
            rel: dict = {}
            _relevant_atoms(rule.body, base, env, defined, rel)
            atoms = list(rel)
        else:
            atoms = all_atoms
        for combo in itertools.product(values3, repeat=len(atoms)):
            j = base.with_values(dict(zip(atoms, combo)))
            if eval_formula(rule.body, j, env) is not TruthValue.TRUE:
                continue
            body = frozenset((a, v is TruthValue.TRUE) for a, v in zip(atoms, combo) if v is not TruthValue.UNKNOWN)
            if (head, body) in seen:
                continue
            seen.add((head, body))
            emitted += 1
            if emitted > max_rules:
                raise LimitExceeded(f"literal grounding exceeds {max_rules} rules")
            rules.append((head, body))
    rules.sort(key=lambda r: (base.atom_key(r[0]), sorted((base.atom_key(a), s) for a, s in r[1])))
    return LiteralGroundDefinition(tuple(all_atoms), tuple(rules), base, d.defined)

"""Abstract syntax of ID-logic: terms, formulas, rules, definitions, theories.

All nodes are frozen dataclasses, so they compare structurally and can be
shared freely between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import SyntaxModelError


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple


@dataclass(frozen=True)
class Elem:
    """A domain element used as a term (the constants added by grounding)."""

    value: str


Term = Union[Var, Const, App, Elem]


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Truth:
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Meta:
    """Schematic formula variable, only meaningful inside substitution patterns."""

    name: str


Formula = Union[Atom, Eq, Truth, Not, And, Or, Implies, Iff, Forall, Exists, Meta]


def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def forall(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(tuple(names)):
        body = Forall(name, body)
    return body


def exists(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(tuple(names)):
        body = Exists(name, body)
    return body


# -- traversal helpers -------------------------------------------------------


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, App):
        for a in t.args:
            yield from term_vars(a)


def _free_vars_ordered(f: Formula, bound: frozenset, out: dict) -> None:
    if isinstance(f, Atom):
        for t in f.args:
            for v in term_vars(t):
                if v not in bound:
                    out.setdefault(v, None)
    elif isinstance(f, Eq):
        for t in (f.left, f.right):
            for v in term_vars(t):
                if v not in bound:
                    out.setdefault(v, None)
    elif isinstance(f, Not):
        _free_vars_ordered(f.body, bound, out)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _free_vars_ordered(a, bound, out)
    elif isinstance(f, (Implies, Iff)):
        _free_vars_ordered(f.left, bound, out)
        _free_vars_ordered(f.right, bound, out)
    elif isinstance(f, (Forall, Exists)):
        _free_vars_ordered(f.body, bound | {f.var}, out)


def free_vars(f: Formula) -> frozenset:
    """Variables of ``f`` not bound by an enclosing quantifier."""
    out: dict = {}
    _free_vars_ordered(f, frozenset(), out)
    return frozenset(out)


def free_vars_in_order(f: Formula) -> tuple:
    out: dict = {}
    _free_vars_ordered(f, frozenset(), out)
    return tuple(out)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from subformulas(a)
    elif isinstance(f, (Implies, Iff)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from subformulas(f.body)


def atoms_of(f: Formula) -> Iterator[Atom]:
    for g in subformulas(f):
        if isinstance(g, Atom):
            yield g


def predicates_of(f: Formula) -> set:
    return {a.pred for a in atoms_of(f)}


def _term_symbols(t: Term, consts: set, funcs: dict) -> None:
    if isinstance(t, Const):
        consts.add(t.name)
    elif isinstance(t, App):
        funcs[t.func] = len(t.args)
        for a in t.args:
            _term_symbols(a, consts, funcs)


def symbols_of(f: Formula) -> tuple:
    """(constants, functions name->arity, predicates name->arity) used by ``f``."""
    consts: set = set()
    funcs: dict = {}
    preds: dict = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            preds[g.pred] = len(g.args)
            for t in g.args:
                _term_symbols(t, consts, funcs)
        elif isinstance(g, Eq):
            _term_symbols(g.left, consts, funcs)
            _term_symbols(g.right, consts, funcs)
    return consts, funcs, preds


def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.func, tuple(substitute_term(a, mapping) for a in t.args))
    return t


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free variables by terms.

    Not capture-avoiding: callers substitute ground terms or fresh names.
    """
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(substitute_term(t, mapping) for t in f.args))
    if isinstance(f, Eq):
        return Eq(substitute_term(f.left, mapping), substitute_term(f.right, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    return f


def all_var_names(f: Formula) -> set:
    names = set(free_vars(f))
    for g in subformulas(f):
        if isinstance(g, (Forall, Exists)):
            names.add(g.var)
    return names


def fresh_names(prefix: str, avoid: Iterable[str], count: int) -> list:
    avoid = set(avoid)
    out = []
    for i in itertools.count(1):
        if len(out) == count:
            break
        name = f"{prefix}{i}"
        if name not in avoid:
            out.append(name)
    return out


def canonical(f: Formula) -> Formula:
    """Rename bound variables to positional names; alpha-equivalent formulas map to equal results."""
    return _canon(f, {}, 0)


def _canon_term(t: Term, env: dict) -> Term:
    if isinstance(t, Var):
        return Var(env[t.name]) if t.name in env else t
    if isinstance(t, App):
        return App(t.func, tuple(_canon_term(a, env) for a in t.args))
    return t


def _canon(f: Formula, env: dict, depth: int) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_canon_term(t, env) for t in f.args))
    if isinstance(f, Eq):
        return Eq(_canon_term(f.left, env), _canon_term(f.right, env))
    if isinstance(f, Not):
        return Not(_canon(f.body, env, depth))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_canon(a, env, depth) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_canon(f.left, env, depth), _canon(f.right, env, depth))
    if isinstance(f, (Forall, Exists)):
        name = f"#{depth}"
        return type(f)(name, _canon(f.body, {**env, f.var: name}, depth + 1))
    return f


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    return canonical(f) == canonical(g)


# -- rules, definitions, theories --------------------------------------------


@dataclass(frozen=True)
class Rule:
    head_pred: str
    head_args: tuple
    body: Formula = TRUE

    @property
    def head(self) -> Atom:
        return Atom(self.head_pred, self.head_args)

    @property
    def variables(self) -> tuple:
        """Free variables of head and body, in order of first appearance."""
        out: dict = {}
        for t in self.head_args:
            for v in term_vars(t):
                out.setdefault(v, None)
        for v in free_vars_in_order(self.body):
            out.setdefault(v, None)
        return tuple(out)


@dataclass(frozen=True)
class Definition:
    defined: tuple
    rules: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "defined", tuple(dict.fromkeys(self.defined)))
        object.__setattr__(self, "rules", tuple(self.rules))
        for r in self.rules:
            if r.head_pred not in self.defined:
                raise SyntaxModelError(
                    f"rule head {r.head_pred} is not among the defined predicates {list(self.defined)}"
                )

    def body_predicates(self) -> set:
        out: set = set()
        for r in self.rules:
            out |= predicates_of(r.body)
        return out

    def open_predicates(self) -> set:
        """Open predicates that actually occur in the rules."""
        return self.body_predicates() - set(self.defined)

    def predicates(self) -> set:
        return set(self.defined) | self.body_predicates()


@dataclass(frozen=True)
class Vocabulary:
    constants: frozenset = frozenset()
    functions: Mapping = field(default_factory=dict)
    predicates: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(self.constants))
        object.__setattr__(self, "functions", dict(self.functions))
        object.__setattr__(self, "predicates", dict(self.predicates))
        c, f, p = set(self.constants), set(self.functions), set(self.predicates)
        clash = (c & f) | (c & p) | (f & p)
        if clash:
            raise SyntaxModelError(f"symbol declared in two categories: {sorted(clash)}")
        for name, arity in self.functions.items():
            if arity < 1:
                raise SyntaxModelError(f"function {name} must have arity >= 1")
        for name, arity in self.predicates.items():
            if arity < 0:
                raise SyntaxModelError(f"predicate {name} has negative arity")

    def kind(self, name: str):
        if name in self.constants:
            return "const"
        if name in self.functions:
            return "func"
        if name in self.predicates:
            return "pred"
        return None

    def names(self) -> set:
        return set(self.constants) | set(self.functions) | set(self.predicates)

    def union(self, other: "Vocabulary") -> "Vocabulary":
        for name, arity in other.functions.items():
            if self.functions.get(name, arity) != arity:
                raise SyntaxModelError(f"function {name} declared with two arities")
        for name, arity in other.predicates.items():
            if self.predicates.get(name, arity) != arity:
                raise SyntaxModelError(f"predicate {name} declared with two arities")
        return Vocabulary(
            self.constants | other.constants,
            {**self.functions, **other.functions},
            {**self.predicates, **other.predicates},
        )

    def with_predicates(self, preds: Mapping) -> "Vocabulary":
        return self.union(Vocabulary(predicates=preds))

    @classmethod
    def infer(cls, formulas: Iterable[Formula] = (), rules: Iterable[Rule] = ()) -> "Vocabulary":
        consts: set = set()
        funcs: dict = {}
        preds: dict = {}
        for r in rules:
            preds[r.head_pred] = len(r.head_args)
            for t in r.head_args:
                _term_symbols(t, consts, funcs)
            formulas = itertools.chain(formulas, [r.body])
        for f in formulas:
            c, fn, p = symbols_of(f)
            consts |= c
            funcs.update(fn)
            preds.update(p)
        return cls(consts, funcs, preds)


@dataclass(frozen=True)
class Theory:
    vocabulary: Vocabulary = field(default_factory=Vocabulary)
    sentences: tuple = ()
    definitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "definitions", tuple(self.definitions))

    def validate(self) -> None:
        """Raise unless every symbol is declared with the right arity and sentences are closed."""
        v = self.vocabulary
        for s in self.sentences:
            fv = free_vars(s)
            if fv:
                raise SyntaxModelError(f"sentence has free variables {sorted(fv)}")
            _check_symbols(s, v)
        for d in self.definitions:
            for p in d.defined:
                if p not in v.predicates:
                    raise SyntaxModelError(f"defined predicate {p} is not declared")
            for r in d.rules:
                _check_symbols(Atom(r.head_pred, r.head_args), v)
                _check_symbols(r.body, v)

    def defined_predicates(self) -> set:
        return {p for d in self.definitions for p in d.defined}

    def extend(self, other: "Theory") -> "Theory":
        return Theory(
            self.vocabulary.union(other.vocabulary),
            self.sentences + other.sentences,
            self.definitions + other.definitions,
        )


def _check_symbols(f: Formula, v: Vocabulary) -> None:
    consts, funcs, preds = symbols_of(f)
    for c in consts:
        if c not in v.constants:
            raise SyntaxModelError(f"undeclared constant {c}")
    for name, arity in funcs.items():
        if v.functions.get(name) != arity:
            raise SyntaxModelError(f"function {name}/{arity} is not declared")
    for name, arity in preds.items():
        if v.predicates.get(name) != arity:
            raise SyntaxModelError(f"predicate {name}/{arity} is not declared")

"""Finite structures, three-valued interpretations and strong Kleene evaluation."""

from __future__ import annotations

import itertools
from enum import IntEnum
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import EvaluationError, ParseError, StructureError
from .parser import Parser
from .syntax import (
    And,
    App,
    Atom,
    Const,
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
    Var,
    Vocabulary,
)


class TruthValue(IntEnum):
    """Three truth values, numbered along the truth order false < unknown < true.

    With this numbering Kleene conjunction is ``min``, disjunction ``max`` and
    negation ``2 - v``.
    """

    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    def __invert__(self) -> "TruthValue":
        return TruthValue(2 - self)

    def __and__(self, other) -> "TruthValue":
        return TruthValue(min(self, other))

    def __or__(self, other) -> "TruthValue":
        return TruthValue(max(self, other))

    @classmethod
    def of(cls, b: bool) -> "TruthValue":
        return cls.TRUE if b else cls.FALSE

    def is_definite(self) -> bool:
        return self is not TruthValue.UNKNOWN

    def precision_leq(self, other: "TruthValue") -> bool:
        return self is TruthValue.UNKNOWN or self == other

    def __str__(self) -> str:
        return self.name.lower()


T, U, F = TruthValue.TRUE, TruthValue.UNKNOWN, TruthValue.FALSE


class GroundAtom(NamedTuple):
    pred: str
    args: tuple

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(self.args)})"


class Structure:
    """A finite domain with total constant/function maps and three-valued predicate tables.

    Only definite (true/false) predicate entries are stored; every other tuple
    is unknown.  Instances are treated as immutable: the ``with_*`` methods
    return modified copies.
    """

    __slots__ = ("domain", "constants", "functions", "arities", "tables", "_index")

    def __init__(
        self,
        domain: Iterable[str],
        constants: Mapping[str, str] | None = None,
        functions: Mapping[str, Mapping[tuple, str]] | None = None,
        predicates: Mapping[str, Mapping[tuple, TruthValue]] | None = None,
        arities: Mapping[str, int] | None = None,
    ):
        self.domain = tuple(dict.fromkeys(domain))
        self._index = {d: i for i, d in enumerate(self.domain)}
        self.constants = dict(constants or {})
        self.functions = {name: dict(table) for name, table in (functions or {}).items()}
        self.arities = dict(arities or {})
        self.tables = {}
        for name, table in (predicates or {}).items():
            clean = {tuple(k): TruthValue(v) for k, v in table.items() if TruthValue(v) is not U}
            self.tables[name] = clean
            if name not in self.arities:
                if not table:
                    raise StructureError(f"cannot infer the arity of predicate {name}")
                self.arities[name] = len(next(iter(table)))
        for name in self.arities:
            self.tables.setdefault(name, {})
        for name, value in self.constants.items():
            if value not in self._index:
                raise StructureError(f"constant {name} denotes {value}, which is not in the domain")

    @classmethod
    def for_vocabulary(cls, vocabulary: Vocabulary, domain, constants=None, functions=None, predicates=None):
        """A structure with every predicate of ``vocabulary`` present (unknown where unspecified)."""
        return cls(domain, constants, functions, predicates, dict(vocabulary.predicates))

    # -- basic queries

    def copy(self) -> "Structure":
        s = Structure.__new__(Structure)
        s.domain = self.domain
        s._index = self._index
        s.constants = self.constants
        s.functions = self.functions
        s.arities = self.arities
        s.tables = dict(self.tables)
        return s

    def element_key(self, element: str) -> int:
        return self._index[element]

    def atom_key(self, atom: GroundAtom) -> tuple:
        return (atom.pred, tuple(self._index[a] for a in atom.args))

    def tuples(self, arity: int) -> Iterator[tuple]:
        return itertools.product(self.domain, repeat=arity)

    def atoms(self, preds: Iterable[str] | None = None) -> list:
        """Ground atoms of the given predicates (default: all), in canonical order."""
        names = sorted(self.arities if preds is None else preds)
        out = []
        for p in names:
            if p not in self.arities:
                raise StructureError(f"structure does not interpret predicate {p}")
            out.extend(GroundAtom(p, t) for t in self.tuples(self.arities[p]))
        return out

    def value(self, pred: str, args: tuple) -> TruthValue:
        table = self.tables.get(pred)
        if table is None:
            raise StructureError(f"structure does not interpret predicate {pred}")
        return table.get(args, U)

    def __getitem__(self, atom: GroundAtom) -> TruthValue:
        return self.value(atom.pred, atom.args)

    def apply(self, func: str, args: tuple) -> str:
        table = self.functions.get(func)
        if table is None:
            raise StructureError(f"structure does not interpret function {func}")
        try:
            return table[args]
        except KeyError:
            raise StructureError(f"function {func} is undefined on {args}") from None

    def is_total(self, preds: Iterable[str] | None = None) -> bool:
        for p in self.arities if preds is None else preds:
            if len(self.tables.get(p, ())) != len(self.domain) ** self.arities[p]:
                return False
        return True

    def unknown_atoms(self, preds: Iterable[str] | None = None) -> list:
        return [a for a in self.atoms(preds) if self[a] is U]

    # -- derived structures

    def with_values(self, values: Mapping[GroundAtom, TruthValue]) -> "Structure":
        s = self.copy()
        touched: dict = {}
        for atom, v in values.items():
            if atom.pred not in s.arities:
                raise StructureError(f"structure does not interpret predicate {atom.pred}")
            table = touched.get(atom.pred)
            if table is None:
                table = touched[atom.pred] = dict(s.tables[atom.pred])
            if v is U or v == 1:
                table.pop(atom.args, None)
            else:
                table[atom.args] = TruthValue(v)
        s.tables.update(touched)
        return s

    def with_predicates(self, arities: Mapping[str, int]) -> "Structure":
        """Add (all-unknown) predicates, or check existing arities."""
        s = self.copy()
        s.arities = dict(self.arities)
        for name, arity in arities.items():
            if name in s.arities:
                if s.arities[name] != arity:
                    raise StructureError(f"predicate {name} has arity {s.arities[name]}, expected {arity}")
                continue
            s.arities[name] = arity
            s.tables[name] = {}
        return s

    def erase(self, preds: Iterable[str]) -> "Structure":
        s = self.copy()
        for p in preds:
            if p in s.tables:
                s.tables[p] = {}
        return s

    def with_constants(self, constants: Mapping[str, str]) -> "Structure":
        s = self.copy()
        s.constants = {**self.constants, **constants}
        return s

    def check_vocabulary(self, vocabulary: Vocabulary, *, predicates=True) -> "Structure":
        """Raise StructureError unless constants and functions are interpreted totally.

        Returns a structure that also has every predicate of the vocabulary
        (missing ones all-unknown).
        """
        for c in vocabulary.constants:
            if c not in self.constants:
                raise StructureError(f"structure does not interpret constant {c}")
        for f, arity in vocabulary.functions.items():
            table = self.functions.get(f)
            if table is None:
                raise StructureError(f"structure does not interpret function {f}")
            for args in self.tuples(arity):
                if args not in table:
                    raise StructureError(f"function {f} is undefined on {args}")
                if table[args] not in self._index:
                    raise StructureError(f"function {f} maps {args} outside the domain")
        return self.with_predicates(vocabulary.predicates) if predicates else self

    # -- comparison

    def same_frame(self, other: "Structure") -> bool:
        return (
            set(self.domain) == set(other.domain)
            and self.constants == other.constants
            and self.functions == other.functions
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return self.same_frame(other) and self.arities == other.arities and self.tables == other.tables

    def __hash__(self):
        return hash((frozenset(self.domain), frozenset((p, frozenset(t.items())) for p, t in self.tables.items())))

    def restrict_equal(self, other: "Structure", preds: Iterable[str]) -> bool:
        return all(self.tables.get(p, {}) == other.tables.get(p, {}) for p in preds)

    def true_atoms(self, preds=None) -> list:
        return [a for a in self.atoms(preds) if self[a] is T]

    def __repr__(self) -> str:
        return f"Structure(domain={list(self.domain)}, {render_structure(self)!r})"


# -- evaluation --------------------------------------------------------------


def eval_term(t: Term, s: Structure, env: Mapping[str, str] | None = None) -> str:
    """Value of a term; domain-element literals denote themselves."""
    if isinstance(t, Elem):
        if t.value not in s._index:
            raise StructureError(f"{t.value} is not a domain element")
        return t.value
    if isinstance(t, Const):
        try:
            return s.constants[t.name]
        except KeyError:
            raise StructureError(f"structure does not interpret constant {t.name}") from None
    if isinstance(t, Var):
        if env is not None and t.name in env:
            return env[t.name]
        raise EvaluationError(f"unbound variable {t.name}")
    if isinstance(t, App):
        return s.apply(t.func, tuple(eval_term(a, s, env) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def eval_formula(f: Formula, s: Structure, env: Mapping[str, str] | None = None) -> TruthValue:
    """Strong Kleene value of ``f``; quantifiers range over the finite domain."""
    env = {} if env is None else env
    if isinstance(f, Atom):
        return s.value(f.pred, tuple(eval_term(a, s, env) for a in f.args))
    if isinstance(f, Eq):
        return TruthValue.of(eval_term(f.left, s, env) == eval_term(f.right, s, env))
    if isinstance(f, Truth):
        return T if f.value else F
    if isinstance(f, Not):
        return ~eval_formula(f.body, s, env)
    if isinstance(f, And):
        result = T
        for a in f.args:
            result = result & eval_formula(a, s, env)
            if result is F:
                break
        return result
    if isinstance(f, Or):
        result = F
        for a in f.args:
            result = result | eval_formula(a, s, env)
            if result is T:
                break
        return result
    if isinstance(f, Implies):
        return ~eval_formula(f.left, s, env) | eval_formula(f.right, s, env)
    if isinstance(f, Iff):
        a = eval_formula(f.left, s, env)
        b = eval_formula(f.right, s, env)
        return (~a | b) & (~b | a)
    if isinstance(f, Forall):
        result = T
        for d in s.domain:
            result = result & eval_formula(f.body, s, {**env, f.var: d})
            if result is F:
                break
        return result
    if isinstance(f, Exists):
        result = F
        for d in s.domain:
            result = result | eval_formula(f.body, s, {**env, f.var: d})
            if result is T:
                break
        return result
    if isinstance(f, Meta):
        raise EvaluationError(f"schematic variable ${f.name} cannot be evaluated")
    raise TypeError(f"not a formula: {f!r}")


def restrict_open(s: Structure, d: Definition) -> Structure:
    """Erase the defined predicates of ``d`` to all-unknown."""
    return s.erase(d.defined)


def precision_leq(a: Structure, b: Structure) -> bool:
    """True iff every definite value of ``a`` is shared by ``b``."""
    if not a.same_frame(b):
        raise StructureError("structures have different domains or function interpretations")
    for p, table in a.tables.items():
        other = b.tables.get(p)
        if other is None:
            if table:
                return False
            continue
        for args, v in table.items():
            if other.get(args) != v:
                return False
    return True


def to_literals(s: Structure, preds: Iterable[str]) -> frozenset:
    """The consistent literal set S_I over the atoms of ``preds``: pairs (atom, sign)."""
    return frozenset(
        (GroundAtom(p, args), v is T) for p in preds for args, v in s.tables.get(p, {}).items()
    )


def from_literals(base: Structure, preds: Iterable[str], literals: Iterable[tuple]) -> Structure:
    """The interpretation J_S: ``base`` with ``preds`` set from the literal set, unknown elsewhere."""
    values: dict = {}
    for atom, sign in literals:
        v = T if sign else F
        if values.get(atom, v) != v:
            raise StructureError(f"inconsistent literal set: both {atom} and its negation")
        values[atom] = v
    return base.erase(preds).with_values(values)


# -- structure file format ---------------------------------------------------
#
#   structure {
#     domain = {d0, d1, d2}.
#     const 0 = d0.
#     func s = {d0->d1, d1->d2, d2->d2}.          (binary: (d0,d1)->d2)
#     func do = default z except {(a, d0)->d1}.   (unlisted tuples map to z)
#     pred male = {(d0): true, (d1): false}.      (omitted tuples are unknown)
#     pred p = total false except {(d0): true}.
#     pred q/2 = {}.                              (arity for empty tables)
#   }


def _parse_tuple(p: Parser) -> tuple:
    if p.at("("):
        p.advance()
        items = []
        if not p.at(")"):
            items.append(p.expect_name().text)
            while p.at(","):
                p.advance()
                items.append(p.expect_name().text)
        p.expect(")")
        return tuple(items)
    return (p.expect_name().text,)


def parse_structure(text: str) -> Structure:
    p = Parser(text)
    p.expect("structure")
    p.expect("{")
    domain: list = []
    constants: dict = {}
    functions: dict = {}
    predicates: dict = {}
    arities: dict = {}
    defaults: dict = {}
    fallback: dict = {}
    while not p.at("}"):
        kw = p.expect_name()
        if kw.text == "domain":
            p.expect("=")
            p.expect("{")
            if not p.at("}"):
                domain.append(p.expect_name().text)
                while p.at(","):
                    p.advance()
                    domain.append(p.expect_name().text)
            p.expect("}")
        elif kw.text == "const":
            name = p.expect_name().text
            p.expect("=")
            constants[name] = p.expect_name().text
        elif kw.text == "func":
            name = p.expect_name().text
            p.expect("=")
            if p.at("default"):
                p.advance()
                fallback[name] = p.expect_name().text
                p.expect("except")
            p.expect("{")
            table = {}
            while not p.at("}"):
                args = _parse_tuple(p)
                p.expect("->")
                table[args] = p.expect_name().text
                if not p.at(","):
                    break
                p.advance()
            p.expect("}")
            functions[name] = table
        elif kw.text == "pred":
            name_tok = p.expect_name()
            name = name_tok.text
            if p.at("/"):
                p.advance()
                arities[name] = int(p.expect_name().text)
            p.expect("=")
            if p.at("total"):
                p.advance()
                default = p.expect_name().text
                if default not in ("true", "false"):
                    p.error("expected 'true' or 'false' after 'total'")
                defaults[name] = T if default == "true" else F
                p.expect("except")
            p.expect("{")
            table = {}
            while not p.at("}"):
                args = _parse_tuple(p)
                p.expect(":")
                val = p.expect_name()
                if val.text not in ("true", "false", "unknown"):
                    p.error("expected true, false or unknown", val)
                table[args] = TruthValue[val.text.upper()]
                if not p.at(","):
                    break
                p.advance()
            p.expect("}")
            predicates[name] = table
            if table:
                lengths = {len(k) for k in table}
                if len(lengths) != 1 or arities.get(name, len(next(iter(table)))) != lengths.pop():
                    p.error(f"inconsistent tuple lengths for predicate {name}", name_tok)
            elif name not in arities:
                p.error(f"predicate {name} has no entries; declare its arity as {name}/N", name_tok)
        else:
            p.error(f"expected domain, const, func or pred, found {kw.text!r}", kw)
        p.expect(".")
    p.expect("}")
    if not p.done():
        p.error("unexpected text after structure")
    dom_set = set(domain)
    for table in functions.values():
        for args, value in table.items():
            for e in args + (value,):
                if e not in dom_set:
                    raise ParseError(f"function table mentions {e}, which is not in the domain")
    for name, table in predicates.items():
        for args in table:
            for e in args:
                if e not in dom_set:
                    raise ParseError(f"predicate {name} mentions {e}, which is not in the domain")
        arities.setdefault(name, len(next(iter(table))) if table else 0)
    for name, value in fallback.items():
        if value not in dom_set:
            raise ParseError(f"function default {value} is not in the domain")
        arity = len(next(iter(functions[name]))) if functions[name] else None
        if arity is None:
            raise ParseError(f"function {name} needs at least one explicit entry to fix its arity")
        functions[name] = {**{t: value for t in itertools.product(domain, repeat=arity)}, **functions[name]}
    full = {}
    for name, table in predicates.items():
        if name in defaults:
            table = {**{t: defaults[name] for t in itertools.product(domain, repeat=arities[name])}, **table}
        full[name] = table
    return Structure(domain, constants, functions, full, arities)


def render_structure(s: Structure) -> str:
    lines = ["structure {", f"  domain = {{{', '.join(s.domain)}}}."]
    for name in sorted(s.constants):
        lines.append(f"  const {name} = {s.constants[name]}.")

    def tup(args):
        return f"({', '.join(args)})"

    for name in sorted(s.functions):
        table = s.functions[name]
        keys = sorted(table, key=lambda k: tuple(s.element_key(e) for e in k))
        entries = ", ".join(f"{k[0] if len(k) == 1 else tup(k)}->{table[k]}" for k in keys)
        lines.append(f"  func {name} = {{{entries}}}.")
    for name in sorted(s.arities):
        table = s.tables[name]
        keys = sorted(table, key=lambda k: tuple(s.element_key(e) for e in k))
        entries = ", ".join(f"{tup(k)}: {table[k]}" for k in keys)
        lines.append(f"  pred {name}/{s.arities[name]} = {{{entries}}}.")
    lines.append("}")
    return "\n".join(lines) + "\n"

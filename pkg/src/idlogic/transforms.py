"""Equivalence-preserving rewrites of definitions, Clark completion and composition."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import GateError, LimitExceeded
from .structures import TruthValue
from .syntax import (
    TRUE,
    And,
    Atom,
    Definition,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Meta,
    Not,
    Or,
    Rule,
    Theory,
    Truth,
    Var,
    all_var_names,
    canonical,
    conj,
    exists,
    forall,
    fresh_names,
    free_vars,
    substitute,
)


def _rule_names(r: Rule) -> set:
    names = set(r.variables)
    names |= all_var_names(r.body)
    return names


def normalize_head(r: Rule, head_vars: list | None = None, avoid=()) -> Rule:
    """``p(t..) <- F`` becomes ``p(Y..) <- ? X.. : (Y1 = t1 & .. & F)`` with fresh Y."""
    if head_vars is None:
        head_vars = fresh_names("Y", _rule_names(r) | set(avoid), len(r.head_args))
    eqs = [Eq(Var(y), t) for y, t in zip(head_vars, r.head_args)]
    body = conj(eqs + [r.body]) if eqs else r.body
    return Rule(r.head_pred, tuple(Var(y) for y in head_vars), exists(r.variables, body))


def merge_cases(d: Definition, avoid=()) -> Definition:
    """One rule per defined predicate, with the normalized bodies joined by disjunction."""
    taken = set(avoid)
    for r in d.rules:
        taken |= _rule_names(r)
    rules = []
    for p in d.defined:
        cases = [r for r in d.rules if r.head_pred == p]
        if not cases:
            continue
        head_vars = fresh_names("Y", taken, len(cases[0].head_args))
        normalized = [normalize_head(r, head_vars) for r in cases]
        body = normalized[0].body if len(normalized) == 1 else Or(tuple(n.body for n in normalized))
        rules.append(Rule(p, normalized[0].head_args, body))
    return Definition(d.defined, tuple(rules))


def eliminate_equalities(f: Formula) -> Formula:
    """Drop ``? X : (.. & Y = X & ..)`` by substituting Y for X; also drops ``true`` conjuncts.

    Only applied when Y is not rebound inside the body, so no capture occurs.
    """
    if isinstance(f, Exists):
        names = []
        body = f
        while isinstance(body, Exists):
            names.append(body.var)
            body = body.body
        body = eliminate_equalities(body)
        conjuncts = list(body.args) if isinstance(body, And) else [body]
        changed = True
        while changed:
            changed = False
            for i, c in enumerate(conjuncts):
                if not isinstance(c, Eq) or not isinstance(c.left, Var) or not isinstance(c.right, Var):
                    continue
                for inner, outer in ((c.right.name, c.left.name), (c.left.name, c.right.name)):
                    if inner in names and outer not in names and inner != outer:
                        rest = conjuncts[:i] + conjuncts[i + 1 :]
                        if any(outer in all_var_names(r) - free_vars(r) for r in rest):
                            continue
                        conjuncts = [substitute(r, {inner: Var(outer)}) for r in rest]
                        names.remove(inner)
                        changed = True
                        break
                if changed:
                    break
        conjuncts = [c for c in conjuncts if c != TRUE] or [TRUE]
        body = conj(conjuncts)
        used = free_vars(body)
        return exists([n for n in names if n in used], body)
    if isinstance(f, And):
        parts = [eliminate_equalities(a) for a in f.args]
        parts = [p for p in parts if p != TRUE] or [TRUE]
        return conj(parts)
    if isinstance(f, Or):
        return Or(tuple(eliminate_equalities(a) for a in f.args))
    if isinstance(f, Not):
        return Not(eliminate_equalities(f.body))
    if isinstance(f, (Implies, Iff)):
        return type(f)(eliminate_equalities(f.left), eliminate_equalities(f.right))
    if isinstance(f, Forall):
        return Forall(f.var, eliminate_equalities(f.body))
    return f


@dataclass(frozen=True)
class CompletionTheory:
    defined: tuple
    sentences: tuple


def completion_definition(d: Definition, avoid=()) -> Definition:
    """The definition whose single rule per predicate is the (simplified) completion body."""
    merged = merge_cases(d, avoid)
    return Definition(
        d.defined, tuple(Rule(r.head_pred, r.head_args, eliminate_equalities(r.body)) for r in merged.rules)
    )


def clark_completion(d: Definition, arities: dict | None = None, avoid=()) -> CompletionTheory:
    """``! Y.. : p(Y..) <=> body`` per defined predicate; ``! Y.. : ~p(Y..)`` when p has no rules.

    ``arities`` is needed only for defined predicates without rules.
    """
    comp = completion_definition(d, avoid)
    by_pred = {r.head_pred: r for r in comp.rules}
    taken = set(avoid)
    for r in d.rules:
        taken |= _rule_names(r)
    sentences = []
    for p in d.defined:
        r = by_pred.get(p)
        if r is None:
            arity = (arities or {}).get(p)
            if arity is None:
                raise ValueError(f"arity of rule-less predicate {p} is unknown")
            ys = fresh_names("Y", taken, arity)
            sentences.append(forall(ys, Not(Atom(p, tuple(Var(y) for y in ys)))))
        else:
            ys = [t.name for t in r.head_args]
            sentences.append(forall(ys, Iff(Atom(p, r.head_args), r.body)))
    return CompletionTheory(d.defined, tuple(sentences))


def completion_theory(t: Theory) -> Theory:
    """Replace every definition of ``t`` by its completion sentences."""
    avoid = t.vocabulary.names()
    sentences = list(t.sentences)
    for d in t.definitions:
        sentences.extend(clark_completion(d, t.vocabulary.predicates, avoid).sentences)
    return Theory(t.vocabulary, sentences, ())


def compose(ds) -> Definition:
    ds = list(ds)
    defined = tuple(itertools.chain.from_iterable(d.defined for d in ds))
    rules = tuple(itertools.chain.from_iterable(d.rules for d in ds))
    return Definition(defined, rules)


# -- three-valued tautologies ------------------------------------------------


class _Skeleton:
    """Propositional abstraction: each distinct atom or quantified subformula becomes a variable."""

    def __init__(self):
        self.keys: dict = {}
        self.two_valued: list = []

    def var(self, key, two_valued: bool) -> int:
        if key not in self.keys:
            self.keys[key] = len(self.keys)
            self.two_valued.append(two_valued)
        return self.keys[key]

    def build(self, f: Formula):
        if isinstance(f, Truth):
            return ("c", 2 if f.value else 0)
        if isinstance(f, (Atom, Meta)):
            return ("v", self.var(f, False))
        if isinstance(f, Eq):
            return ("v", self.var(f, True))
        if isinstance(f, (Forall, Exists)):
            return ("v", self.var(canonical(f), False))
        if isinstance(f, Not):
            return ("not", self.build(f.body))
        if isinstance(f, And):
            return ("and", [self.build(a) for a in f.args])
        if isinstance(f, Or):
            return ("or", [self.build(a) for a in f.args])
        if isinstance(f, Implies):
            return ("or", [("not", self.build(f.left)), self.build(f.right)])
        if isinstance(f, Iff):
            a, b = self.build(f.left), self.build(f.right)
            return ("and", [("or", [("not", a), b]), ("or", [("not", b), a])])
        raise TypeError(f"not a formula: {f!r}")


def _skel_eval(node, vals) -> int:
    tag = node[0]
    if tag == "v":
        return vals[node[1]]
    if tag == "c":
        return node[1]
    if tag == "not":
        return 2 - _skel_eval(node[1], vals)
    if tag == "and":
        return min(_skel_eval(c, vals) for c in node[1])
    return max(_skel_eval(c, vals) for c in node[1])


def tautology_countermodel(f: Formula, cap: int = 3**12):
    """None if ``f`` is true under every three-valued assignment of its skeleton, else a falsifying assignment.

    The assignment maps each abstracted subformula to a TruthValue.
    """
    sk = _Skeleton()
    tree = sk.build(f)
    keys = list(sk.keys)
    for vals in _assignments(sk, cap):
        if _skel_eval(tree, vals) != 2:
            return {k: TruthValue(v) for k, v in zip(keys, vals)}
    return None


def three_valued_tautology(f: Formula, cap: int = 3**12) -> bool:
    return tautology_countermodel(f, cap) is None


def _assignments(sk: _Skeleton, cap: int):
    domains = [(0, 2) if two else (0, 1, 2) for two in sk.two_valued]
    size = 1
    for dom in domains:
        size *= len(dom)
    if size > cap:
        raise LimitExceeded(f"equivalence check needs {size} assignments (cap {cap})")
    return itertools.product(*domains)


def equivalence_countermodel(f: Formula, g: Formula, cap: int = 3**12):
    """None if ``f`` and ``g`` take the same three-valued value under every skeleton assignment,
    else an assignment on which they differ.

    This is the notion of 3-valued equivalence that licenses substitution:
    ``~~p`` and ``p`` agree everywhere, whereas ``p | ~p`` and ``true`` differ
    when ``p`` is unknown.
    """
    sk = _Skeleton()
    a, b = sk.build(f), sk.build(g)
    keys = list(sk.keys)
    for vals in _assignments(sk, cap):
        if _skel_eval(a, vals) != _skel_eval(b, vals):
            return {k: TruthValue(v) for k, v in zip(keys, vals)}
    return None


def equivalent_3valued(f: Formula, g: Formula, cap: int = 3**12) -> bool:
    return equivalence_countermodel(f, g, cap) is None


# -- substitution of equivalents ---------------------------------------------


def _match_term(p, t, ren: dict) -> bool:
    if isinstance(p, Var) and p.name in ren:
        return isinstance(t, Var) and t.name == ren[p.name]
    if type(p) is not type(t):
        return False
    if hasattr(p, "args") and hasattr(p, "func"):
        return p.func == t.func and len(p.args) == len(t.args) and all(
            _match_term(a, b, ren) for a, b in zip(p.args, t.args)
        )
    return p == t


def match(pattern: Formula, f: Formula, binding: dict | None = None, ren: dict | None = None):
    """Match a pattern modulo bound-variable renaming; ``$X`` binds any subformula. Returns bindings or None."""
    binding = {} if binding is None else binding
    ren = {} if ren is None else ren
    if isinstance(pattern, Meta):
        if pattern.name in binding:
            return binding if canonical(binding[pattern.name]) == canonical(f) else None
        # a bound subformula must not mention pattern-bound variables
        if free_vars(f) & set(ren.values()):
            return None
        return {**binding, pattern.name: f}
    if type(pattern) is not type(f):
        return None
    if isinstance(pattern, Atom):
        if pattern.pred != f.pred or len(pattern.args) != len(f.args):
            return None
        return binding if all(_match_term(a, b, ren) for a, b in zip(pattern.args, f.args)) else None
    if isinstance(pattern, Eq):
        ok = _match_term(pattern.left, f.left, ren) and _match_term(pattern.right, f.right, ren)
        return binding if ok else None
    if isinstance(pattern, Truth):
        return binding if pattern == f else None
    if isinstance(pattern, Not):
        return match(pattern.body, f.body, binding, ren)
    if isinstance(pattern, (And, Or)):
        if len(pattern.args) != len(f.args):
            return None
        for a, b in zip(pattern.args, f.args):
            binding = match(a, b, binding, ren)
            if binding is None:
                return None
        return binding
    if isinstance(pattern, (Implies, Iff)):
        binding = match(pattern.left, f.left, binding, ren)
        return None if binding is None else match(pattern.right, f.right, binding, ren)
    if isinstance(pattern, (Forall, Exists)):
        return match(pattern.body, f.body, binding, {**ren, pattern.var: f.var})
    return None


def instantiate(template: Formula, binding: dict) -> Formula:
    """Replace schematic variables; bound variables of the template are renamed apart from the bindings."""
    avoid = set()
    for g in binding.values():
        avoid |= all_var_names(g)
    return _inst(template, binding, avoid, {})


def _inst(f, binding, avoid, ren):
    if isinstance(f, Meta):
        return binding[f.name]
    if isinstance(f, (Atom, Eq)):
        return substitute(f, {k: Var(v) for k, v in ren.items()})
    if isinstance(f, Not):
        return Not(_inst(f.body, binding, avoid, ren))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_inst(a, binding, avoid, ren) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_inst(f.left, binding, avoid, ren), _inst(f.right, binding, avoid, ren))
    if isinstance(f, (Forall, Exists)):
        name = f.var
        if name in avoid:
            name = fresh_names(f.var + "_", avoid, 1)[0]
        return type(f)(name, _inst(f.body, binding, avoid | {name}, {**ren, f.var: name}))
    return f


def _replace(f: Formula, pattern: Formula, replacement: Formula) -> Formula:
    binding = match(pattern, f)
    if binding is not None:
        return instantiate(replacement, binding)
    if isinstance(f, Not):
        return Not(_replace(f.body, pattern, replacement))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_replace(a, pattern, replacement) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_replace(f.left, pattern, replacement), _replace(f.right, pattern, replacement))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _replace(f.body, pattern, replacement))
    return f


def substitute_equivalent(d: Definition, pattern: Formula, replacement: Formula, gated: bool = True) -> Definition:
    """Replace every occurrence of ``pattern`` in rule bodies by ``replacement``.

    Refused with GateError unless the two patterns take the same three-valued
    value under every assignment of their skeleton; ``gated=False`` forces the
    rewrite anyway.
    """
    if gated:
        counter = equivalence_countermodel(pattern, replacement)
        if counter is not None:
            raise GateError(f"not 3-valued equivalent; counter-assignment {counter}")
    return Definition(
        d.defined, tuple(Rule(r.head_pred, r.head_args, _replace(r.body, pattern, replacement)) for r in d.rules)
    )

"""Builders that express other formalisms and modelling idioms as ID-logic theories.

Logic programs, abductive frameworks and deductive databases are imported as
definitions plus sentences.  DCA+UNA, tables and situation-calculus frame
definitions are generated from their ingredients.

Line-oriented input formats (``//`` comments, symbols inferred from use)::

    logic program:   p(X) <- q(X) & ~r(X).     r(a).
    abductive:       abducible ab, hidden.     constraint ~(p & q).     <- p & q.     rules as above
    deductive db:    edb parent(a, b).         ic ! X : ~anc(X, X).     <- anc(a, a).  rules for the idb
    fluent spec:     fluent up(X).
                     initiates up(X) by push(X) [if cond].
                     terminates up(X) by pull(X) [if cond].
                     const l1, l2.             guards situation, action.
                     poss(A, S) <- ...         (precondition rules, enables the poss machinery)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import EmbeddingError, ParseError
from .parser import Parser, denial
from .syntax import (
    TRUE,
    And,
    App,
    Atom,
    Const,
    Definition,
    Eq,
    Formula,
    Not,
    Rule,
    Term,
    Theory,
    Var,
    Vocabulary,
    conj,
    forall,
    fresh_names,
    free_vars,
    subformulas,
    term_vars,
)


def import_logic_program(rules, vocabulary: Vocabulary | None = None) -> Theory:
    """A single definition of exactly the head predicates; no sentences."""
    rules = list(rules)
    vocabulary = vocabulary or Vocabulary.infer(rules=rules)
    if not rules:
        return Theory(vocabulary)
    heads = tuple(dict.fromkeys(r.head_pred for r in rules))
    return Theory(vocabulary, (), (Definition(heads, tuple(rules)),))


@dataclass
class AbductiveFramework:
    abducibles: frozenset
    program: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    vocabulary: Vocabulary | None = None

    def __post_init__(self):
        self.abducibles = frozenset(self.abducibles)
        bad = sorted({r.head_pred for r in self.program} & self.abducibles)
        if bad:
            raise EmbeddingError(f"abducible predicates {bad} appear in rule heads")


def import_abductive(fw: AbductiveFramework) -> Theory:
    """Constraints plus one definition of every non-abducible predicate (rule-less ones become false)."""
    vocabulary = fw.vocabulary or Vocabulary.infer(fw.constraints, fw.program)
    bad = sorted({r.head_pred for r in fw.program} & fw.abducibles)
    if bad:
        raise EmbeddingError(f"abducible predicates {bad} appear in rule heads")
    defined = tuple(sorted(p for p in vocabulary.predicates if p not in fw.abducibles))
    return Theory(vocabulary, tuple(fw.constraints), (Definition(defined, tuple(fw.program)),))


@dataclass
class DeductiveDatabase:
    edb: dict  # predicate -> list of tuples of constant names
    idb: list = field(default_factory=list)
    ic: list = field(default_factory=list)
    arities: dict = field(default_factory=dict)  # for empty tables

    def __post_init__(self):
        heads = {r.head_pred for r in self.idb}
        overlap = sorted(heads & set(self.edb))
        if overlap:
            raise EmbeddingError(f"predicates {overlap} are both extensional and intensional")


def table_definition(pred: str, tuples) -> Definition:
    """Definition by exhaustive enumeration: one fact per tuple."""
    tuples = [tuple(t) for t in tuples]
    if len({len(t) for t in tuples}) > 1:
        raise EmbeddingError(f"table {pred} mixes tuple lengths")
    return Definition((pred,), tuple(Rule(pred, tuple(Const(c) for c in t)) for t in tuples))


def import_deductive_db(db: DeductiveDatabase, vocabulary: Vocabulary | None = None) -> Theory:
    """Table definitions for the EDB, one simultaneous IDB definition, the ICs, and DCA+UNA."""
    tables = [table_definition(p, rows) for p, rows in sorted(db.edb.items())]
    if vocabulary is None:
        vocabulary = Vocabulary.infer(db.ic, db.idb + [r for d in tables for r in d.rules])
        extra = {p: db.arities[p] for p in db.edb if p not in vocabulary.predicates and p in db.arities}
        missing = [p for p in db.edb if p not in vocabulary.predicates and p not in extra]
        if missing:
            raise EmbeddingError(f"cannot infer arity of empty tables {missing}")
        vocabulary = vocabulary.with_predicates(extra)
    defs = list(tables)
    if db.idb:
        defs.append(Definition(tuple(dict.fromkeys(r.head_pred for r in db.idb)), tuple(db.idb)))
    base = Theory(vocabulary, tuple(db.ic), tuple(defs))
    return base.extend(dca_una(vocabulary))


def ground_terms(vocabulary: Vocabulary, depth: int) -> list:
    """Ground constructor terms of nesting depth <= ``depth``."""
    layer = [Const(c) for c in sorted(vocabulary.constants)]
    terms = list(layer)
    for _ in range(depth):
        new = []
        for f, n in sorted(vocabulary.functions.items()):
            for args in itertools.product(terms, repeat=n):
                t = App(f, args)
                if t not in new:
                    new.append(t)
        terms = list(dict.fromkeys(terms + new))
    return terms


def dca_una(vocabulary: Vocabulary, una_depth: int = 1, universe: str | None = None) -> Theory:
    """Domain closure (inductive universe predicate plus ``! X : U(X)``) and unique names.

    With function symbols the unique-names part only covers ground terms up to
    ``una_depth`` and is therefore an approximation (full UNA forces an
    infinite domain).
    """
    names = vocabulary.names()
    if universe is None:
        universe = "U" if "U" not in names else fresh_names("U_", names, 1)[0]
    rules = [Rule(universe, (Const(c),)) for c in sorted(vocabulary.constants)]
    for f, n in sorted(vocabulary.functions.items()):
        xs = fresh_names("X", names, n)
        rules.append(Rule(universe, (App(f, tuple(Var(x) for x in xs)),), conj(Atom(universe, (Var(x),)) for x in xs)))
    x = fresh_names("X", names, 1)[0]
    sentences = [forall([x], Atom(universe, (Var(x),)))]
    terms = ground_terms(vocabulary, una_depth if vocabulary.functions else 0)
    for a, b in itertools.combinations(terms, 2):
        sentences.append(Not(Eq(a, b)))
    vocab = Vocabulary(vocabulary.constants, vocabulary.functions, {universe: 1})
    return Theory(vocab, tuple(sentences), (Definition((universe,), tuple(rules)),))


def una_is_exact(vocabulary: Vocabulary) -> bool:
    return not vocabulary.functions


# -- situation calculus ------------------------------------------------------

SITUATION_VAR = "S"
ACTION_VAR = "A"


@dataclass(frozen=True)
class Effect:
    """``cause(action, S, params) <- condition``; ``S`` is the situation variable."""

    action: Term
    params: tuple
    condition: Formula = TRUE


@dataclass(frozen=True)
class FluentSpec:
    name: str
    params: tuple = ()
    initiating: tuple = ()
    terminating: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def cause(self) -> str:
        return f"cause_{self.name}"

    @property
    def cause_not(self) -> str:
        return f"cause_not_{self.name}"

    @property
    def initially(self) -> str:
        return f"initially_{self.name}"


def _check_condition(effect: Effect, fluents: dict, cause_preds: set, s0: str, do: str) -> None:
    """The situation variable may appear only as the last argument of fluent atoms
    (or as the situation argument of a cause atom for the same action: a derived effect)."""
    s = SITUATION_VAR
    for g in subformulas(effect.condition):
        if hasattr(g, "var") and g.var == s:
            raise EmbeddingError("effect conditions must not quantify the situation variable")
        if isinstance(g, Eq):
            for t in (g.left, g.right):
                if s in set(term_vars(t)):
                    raise EmbeddingError("situation variable used in an equality")
        if not isinstance(g, Atom):
            continue
        for i, t in enumerate(g.args):
            if isinstance(t, App) and (t.func == do or s in set(term_vars(t))):
                raise EmbeddingError(f"situation term inside {g.pred}: only S may denote a situation")
            if isinstance(t, Const) and t.name == s0:
                raise EmbeddingError(f"{s0} used in an effect condition")
            if t == Var(s):
                if g.pred in fluents and i == len(g.args) - 1:
                    continue
                if g.pred in cause_preds and i == 1 and g.args[0] == effect.action:
                    continue
                raise EmbeddingError(f"situation variable in a non-fluent position of {g.pred}")


def build_frame_definition(
    fluents,
    guards: tuple | None = None,
    poss_rules=(),
    s0: str = "s0",
    do: str = "do",
) -> Definition:
    """Simultaneous definition of all fluents and their cause predicates.

    Per fluent ``f``::

        f(X.., s0) <- initially_f(X..).
        f(X.., do(A, S)) <- cause_f(A, S, X..).
        f(X.., do(A, S)) <- f(X.., S) & ~cause_not_f(A, S, X..).
        cause_f(act, S, X..) <- cond.           (one per initiating effect)
        cause_not_f(act, S, X..) <- cond.       (one per terminating effect)

    ``guards=(situation, action)`` conjoins ``situation(S) & action(A)`` to the
    successor-state rules (sorts emulated by unary predicates).  Non-empty
    ``poss_rules`` (rules for ``poss/2``) add ``poss(A, S)`` to those rules and
    the persistence case ``f(X.., do(A, S)) <- f_o(X.., do(A, S)) & ~poss(A, S)``.
    """
    fluents = list(fluents)
    by_name = {f.name: f for f in fluents}
    causes = {f.cause for f in fluents} | {f.cause_not for f in fluents}
    a, s = Var(ACTION_VAR), Var(SITUATION_VAR)
    guard = []
    if guards:
        guard = [Atom(guards[0], (s,)), Atom(guards[1], (a,))]
    poss_rules = list(poss_rules)
    poss = [Atom("poss", (a, s))] if poss_rules else []
    defined = []
    rules = []
    for f in fluents:
        if {ACTION_VAR, SITUATION_VAR} & set(f.params):
            raise EmbeddingError(f"fluent {f.name}: parameters must not be named A or S")
        xs = tuple(Var(p) for p in f.params)
        succ = App(do, (a, s))
        defined += [f.name, f.cause, f.cause_not]
        rules.append(Rule(f.name, xs + (Const(s0),), Atom(f.initially, xs)))
        rules.append(Rule(f.name, xs + (succ,), conj(guard + [Atom(f.cause, (a, s) + xs)] + poss)))
        rules.append(
            Rule(f.name, xs + (succ,), conj(guard + [Atom(f.name, xs + (s,)), Not(Atom(f.cause_not, (a, s) + xs))] + poss))
        )
        if poss_rules:
            rules.append(
                Rule(
                    f.name,
                    xs + (succ,),
                    conj(guard + [Atom(f"{f.name}_o", xs + (succ,)), Not(Atom("poss", (a, s)))]),
                )
            )
        for kind, effects in ((f.cause, f.initiating), (f.cause_not, f.terminating)):
            for e in effects:
                if len(e.params) != f.arity:
                    raise EmbeddingError(f"effect on {f.name} has {len(e.params)} parameters, expected {f.arity}")
                _check_condition(e, by_name, causes, s0, do)
                rules.append(Rule(kind, (e.action, s) + tuple(Var(p) for p in e.params), e.condition))
    for r in poss_rules:
        if r.head_pred != "poss":
            raise EmbeddingError("precondition rules must define poss")
        rules.append(r)
    if poss_rules:
        defined.append("poss")
    return Definition(tuple(defined), tuple(rules))


def frame_constraints(fluents) -> list:
    """An action cannot both cause and cancel a fluent: ``<- cause_f(A,S,X..) & cause_not_f(A,S,X..)``."""
    out = []
    for f in fluents:
        args = (Var(ACTION_VAR), Var(SITUATION_VAR)) + tuple(Var(p) for p in f.params)
        out.append(denial(And((Atom(f.cause, args), Atom(f.cause_not, args)))))
    return out


def frame_theory(
    fluents,
    constants=(),
    guards: tuple | None = None,
    poss_rules=(),
    s0: str = "s0",
    do: str = "do",
    consistency: bool = True,
) -> Theory:
    fluents = list(fluents)
    d = build_frame_definition(fluents, guards, poss_rules, s0, do)
    sentences = frame_constraints(fluents) if consistency else []
    vocab = Vocabulary.infer(sentences, d.rules)
    preds = {}
    for f in fluents:
        preds.update({f.name: f.arity + 1, f.initially: f.arity, f.cause: f.arity + 2, f.cause_not: f.arity + 2})
        if poss_rules:
            preds[f"{f.name}_o"] = f.arity + 1
    if poss_rules:
        preds["poss"] = 2
    if guards:
        preds.update({guards[0]: 1, guards[1]: 1})
    vocab = vocab.union(Vocabulary(set(constants) | {s0}, {do: 2}, preds))
    return Theory(vocab, tuple(sentences), (d,))


# -- line-oriented formats ---------------------------------------------------


def _statements(p: Parser, handlers: dict, default):
    while not p.done():
        tok = p.tok
        if tok.kind == "name" and tok.text in handlers and p.peek().text not in ("(", "<-", ".", "=", "!=", "&", "|"):
            p.advance()
            handlers[tok.text]()
        elif p.at("<-"):
            handlers["<-"]()
        else:
            default()


def _name_list(p: Parser) -> list:
    names = [p.expect_name().text]
    while p.at(","):
        p.advance()
        names.append(p.expect_name().text)
    p.expect(".")
    return names


def parse_logic_program(text: str):
    """Rules of a logic program; returns (rules, inferred vocabulary)."""
    p = Parser(text, infer=True)
    rules = []
    while not p.done():
        rules.append(p.parse_rule())
    return rules, p.vocab.freeze()


def parse_abductive(text: str) -> AbductiveFramework:
    p = Parser(text, infer=True)
    abducibles: list = []
    rules: list = []
    constraints: list = []

    def constraint():
        f = p.parse_formula()
        p.expect(".")
        constraints.append(forall(sorted(free_vars(f)), f))

    def deny():
        p.expect("<-")
        f = p.parse_formula()
        p.expect(".")
        constraints.append(denial(f))

    _statements(
        p,
        {"abducible": lambda: abducibles.extend(_name_list(p)), "constraint": constraint, "<-": deny},
        lambda: rules.append(p.parse_rule()),
    )
    vocab = p.vocab.freeze()
    for a in abducibles:
        if a not in vocab.predicates:
            raise ParseError(f"abducible {a} is never used, so its arity is unknown")
    return AbductiveFramework(frozenset(abducibles), rules, constraints, vocab)


def parse_deductive_db(text: str):
    """Returns (DeductiveDatabase, inferred vocabulary)."""
    p = Parser(text, infer=True)
    edb: dict = {}
    idb: list = []
    ic: list = []

    def fact():
        tok = p.tok
        r = p.parse_rule()
        if r.body != TRUE or not all(isinstance(t, Const) for t in r.head_args):
            p.error("edb entries must be ground facts over constants", tok)
        edb.setdefault(r.head_pred, []).append(tuple(t.name for t in r.head_args))

    def constraint():
        f = p.parse_formula()
        p.expect(".")
        ic.append(forall(sorted(free_vars(f)), f))

    def deny():
        p.expect("<-")
        f = p.parse_formula()
        p.expect(".")
        ic.append(denial(f))

    _statements(p, {"edb": fact, "ic": constraint, "<-": deny}, lambda: idb.append(p.parse_rule()))
    vocab = p.vocab.freeze()
    return DeductiveDatabase(edb, idb, ic, {k: vocab.predicates[k] for k in edb}), vocab


@dataclass
class FluentFile:
    fluents: list
    constants: list
    guards: tuple | None
    poss_rules: list

    def theory(self) -> Theory:
        return frame_theory(self.fluents, self.constants, self.guards, self.poss_rules)


def parse_fluent_spec(text: str) -> FluentFile:
    p = Parser(text, infer=True)
    order: list = []
    params: dict = {}
    effects: dict = {}
    constants: list = []
    guards: list = []
    poss_rules: list = []

    def head():
        name = p.expect_name()
        args = []
        if p.at("("):
            p.advance()
            if not p.at(")"):
                args.append(p.expect_name().text)
                while p.at(","):
                    p.advance()
                    args.append(p.expect_name().text)
            p.expect(")")
        return name, tuple(args)

    def fluent():
        name, args = head()
        p.expect(".")
        if name.text in params:
            p.error(f"fluent {name.text} declared twice", name)
        order.append(name.text)
        params[name.text] = args
        effects[name.text] = ([], [])
        n = len(args)
        for pred, arity in (
            (name.text, n + 1),
            (f"initially_{name.text}", n),
            (f"cause_{name.text}", n + 2),
            (f"cause_not_{name.text}", n + 2),
        ):
            p.vocab.declare(pred, "pred", arity, name)

    def effect(kind):
        def run():
            name, args = head()
            if name.text not in params:
                p.error(f"unknown fluent {name.text}", name)
            if len(args) != len(params[name.text]):
                p.error(f"fluent {name.text} takes {len(params[name.text])} parameters", name)
            by = p.expect_name()
            if by.text != "by":
                p.error("expected 'by'", by)
            action = p.parse_term(frozenset())
            cond = TRUE
            if p.at("if"):
                p.advance()
                cond = p.parse_formula()
            p.expect(".")
            effects[name.text][kind].append(Effect(action, args, cond))

        return run

    def const():
        names = _name_list(p)
        for n in names:
            p.vocab.declare(n, "const", 0, p.tok)
        constants.extend(names)

    def guard():
        names = _name_list(p)
        if len(names) != 2:
            p.error("guards takes a situation predicate and an action predicate")
        for n in names:
            p.vocab.declare(n, "pred", 1, p.tok)
        guards.extend(names)

    def rule():
        r = p.parse_rule()
        if r.head_pred != "poss":
            raise ParseError("only poss(A, S) rules may appear in a fluent specification")
        poss_rules.append(r)

    _statements(
        p,
        {"fluent": fluent, "initiates": effect(0), "terminates": effect(1), "const": const, "guards": guard},
        rule,
    )
    fluents = [FluentSpec(n, params[n], tuple(effects[n][0]), tuple(effects[n][1])) for n in order]
    return FluentFile(fluents, constants, tuple(guards) or None, poss_rules)

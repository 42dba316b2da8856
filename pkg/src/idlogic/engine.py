"""Well-founded models of ground definitions, justified interpretations and models.

Ground bodies are compiled into negation normal form over atom indices.
Every literal then has a fixed polarity: positive literals are read from the
interpretation being built by the inner least fixpoint, negative ones from
the approximation being revised.  That is the three-valued stable operator;
its precision-least fixpoint, reached by iterating from all-unknown, is the
well-founded model.

A body stands for the set of consistent literal sets that make it true, so
its value is the best over those sets of the weakest literal.  Plain Kleene
evaluation of the NNF overestimates this when an atom occurs with both
signs (``q & ~q`` can never be made true), so for such atoms the evaluator
also tries committing to one sign at a time.  For the same reason an open
atom that is unknown contributes a literal that is never true.

``literal_well_founded_model`` is an independent route for literal-set
programs (alternating fixpoint with the Gelfond-Lifschitz reduct) used to
check the formula-body engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import EvaluationError, LimitExceeded, NotTotalError
from .grounder import DEFAULT_MAX_RULES, GroundDefinition, LiteralGroundDefinition, ground_definition
from .structures import GroundAtom, Structure, TruthValue, eval_formula, eval_term
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
    Theory,
    Truth,
    substitute,
)

DEFAULT_MAX_NODES = 10**6

# compiled node tags
_CONST, _POS, _NEG, _AND, _OR = range(5)


def compile_body(f: Formula, base: Structure, index: dict, negated: bool = False) -> tuple:
    """Negation normal form of a ground body with open atoms folded to constants.

    ``index`` maps defined ground atoms to positions.  Returns a nested tuple
    tree; see ``_eval``.
    """
    if isinstance(f, Atom):
        args = tuple(eval_term(t, base) for t in f.args)
        atom = GroundAtom(f.pred, args)
        i = index.get(atom)
        if i is not None:
            return (_NEG if negated else _POS, i)
        v = base.value(f.pred, args)
        true = v is (TruthValue.FALSE if negated else TruthValue.TRUE)
        return (_CONST, 2 if true else 0)
    if isinstance(f, Eq):
        same = eval_term(f.left, base) == eval_term(f.right, base)
        return (_CONST, 0 if same == negated else 2)
    if isinstance(f, Truth):
        return (_CONST, 0 if f.value == negated else 2)
    if isinstance(f, Not):
        return compile_body(f.body, base, index, not negated)
    if isinstance(f, (And, Or)):
        conjunctive = isinstance(f, And) != negated
        return _junction(conjunctive, [compile_body(a, base, index, negated) for a in f.args])
    if isinstance(f, Implies):
        return compile_body(Or((Not(f.left), f.right)), base, index, negated)
    if isinstance(f, Iff):
        return compile_body(And((Implies(f.left, f.right), Implies(f.right, f.left))), base, index, negated)
    if isinstance(f, (Forall, Exists)):
        parts = tuple(substitute(f.body, {f.var: Elem(d)}) for d in base.domain)
        expanded = And(parts) if isinstance(f, Forall) else Or(parts)
        return compile_body(expanded, base, index, negated)
    if isinstance(f, Meta):
        raise EvaluationError(f"schematic variable ${f.name} in a rule body")
    raise TypeError(f"not a formula: {f!r}")


def _junction(conjunctive: bool, children: list) -> tuple:
    unit, zero = (2, 0) if conjunctive else (0, 2)
    tag = _AND if conjunctive else _OR
    out = []
    unknown_const = False
    for c in children:
        if c[0] == _CONST:
            if c[1] == zero:
                return (_CONST, zero)
            if c[1] == 1:
                unknown_const = True
            continue
        if c[0] == tag:
            out.extend(c[1])
        else:
            out.append(c)
    if unknown_const:
        out.append((_CONST, 1))
    if not out:
        return (_CONST, unit)
    if len(out) == 1:
        return out[0]
    return (tag, tuple(out))


def _eval(node: tuple, pos: list, neg: list) -> int:
    tag = node[0]
    if tag == _POS:
        return pos[node[1]]
    if tag == _NEG:
        return 2 - neg[node[1]]
    if tag == _AND:
        r = 2
        for c in node[1]:
            v = _eval(c, pos, neg)
            if v < r:
                r = v
                if r == 0:
                    break
        return r
    if tag == _OR:
        r = 0
        for c in node[1]:
            v = _eval(c, pos, neg)
            if v > r:
                r = v
                if r == 2:
                    break
        return r
    return node[1]


def _signed_atoms(node: tuple, pos: set, neg: set) -> None:
    if node[0] == _POS:
        pos.add(node[1])
    elif node[0] == _NEG:
        neg.add(node[1])
    elif node[0] in (_AND, _OR):
        for c in node[1]:
            _signed_atoms(c, pos, neg)


def mixed_atoms(node: tuple) -> tuple:
    """Atoms occurring both positively and negatively in a compiled body."""
    pos: set = set()
    neg: set = set()
    _signed_atoms(node, pos, neg)
    return tuple(sorted(pos & neg))


def eval_body(node: tuple, mixed: tuple, pos: list, neg: list) -> int:
    """Value of a body as the best consistent literal set supporting it.

    ``pos`` supplies the values of positive literals, ``neg`` the atom values
    that negative literals are read from.  Without mixed atoms this is plain
    Kleene evaluation of the NNF; otherwise each live mixed atom is committed
    to one sign, branch and bound.
    """
    v = _eval(node, pos, neg)
    if v == 0 or not mixed:
        return v
    live = [i for i in mixed if pos[i] > 0 and neg[i] < 2]
    if not live:
        return v
    pos, neg = list(pos), list(neg)
    best = 0

    def go(k: int) -> None:
        nonlocal best
        bound = _eval(node, pos, neg)
        if bound <= best:
            return
        if k == len(live):
            best = bound
            return
        i = live[k]
        p0, n0 = pos[i], neg[i]
        pos[i] = 0  # only the negative literal may be used
        go(k + 1)
        pos[i] = p0
        if best == v:
            return
        neg[i] = 2  # only the positive literal may be used
        go(k + 1)
        neg[i] = n0

    go(0)
    return best


def node_atoms(node: tuple, out: set | None = None) -> set:
    out = set() if out is None else out
    if node[0] in (_POS, _NEG):
        out.add(node[1])
    elif node[0] in (_AND, _OR):
        for c in node[1]:
            node_atoms(c, out)
    return out


class CompiledDefinition:
    """A ground definition with bodies compiled against its base interpretation."""

    def __init__(self, g: GroundDefinition):
        self.ground = g
        self.atoms = list(g.defined_atoms)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self.bodies: list = [[] for _ in self.atoms]
        for r in g.rules:
            node = compile_body(r.body, g.base, self.index)
            if node == (_CONST, 0):
                continue
            self.bodies[self.index[r.head]].append((node, mixed_atoms(node)))

    def values_of(self, s: Structure) -> list:
        return [int(s[a]) for a in self.atoms]

    def to_structure(self, values: list) -> Structure:
        return self.ground.base.with_values({a: TruthValue(v) for a, v in zip(self.atoms, values)})

    def stable_revision(self, approx: list) -> list:
        """Truth-least fixpoint of the one-step operator, negative literals read from ``approx``."""
        current = [0] * len(self.atoms)
        while True:
            new = [
                max((eval_body(b, m, current, approx) for b, m in bodies), default=0)
                for bodies in self.bodies
            ]
            if new == current:
                return current
            current = new

    def well_founded(self, trace: list | None = None) -> list:
        approx = [1] * len(self.atoms)
        while True:
            if trace is not None:
                trace.append(list(approx))
            nxt = self.stable_revision(approx)
            if nxt == approx:
                return approx
            approx = nxt


@dataclass
class StableRevisionState:
    current: Structure
    iteration: int = 0
    trace: list = field(default_factory=list)


def stable_operator(g: GroundDefinition, p: Structure) -> Structure:
    """The three-valued stable revision of ``p`` with respect to ``g``."""
    c = CompiledDefinition(g)
    return c.to_structure(c.stable_revision(c.values_of(p)))


def well_founded_state(g: GroundDefinition) -> StableRevisionState:
    """Well-founded model together with the sequence of approximations leading to it."""
    c = CompiledDefinition(g)
    raw: list = []
    values = c.well_founded(raw)
    trace = [c.to_structure(v) for v in raw]
    return StableRevisionState(c.to_structure(values), len(raw) - 1, trace)


def well_founded_model(g: GroundDefinition) -> Structure:
    c = CompiledDefinition(g)
    return c.to_structure(c.well_founded())


def justified_extension(d: Definition, open_part: Structure, max_rules: int = DEFAULT_MAX_RULES) -> Structure:
    """The unique justified interpretation of ``d`` that agrees with ``open_part`` off def(d)."""
    return well_founded_model(ground_definition(d, open_part, max_rules))


def is_justified(d: Definition, interpretation: Structure, max_rules: int = DEFAULT_MAX_RULES) -> bool:
    w = justified_extension(d, interpretation, max_rules)
    return interpretation.restrict_equal(w, d.defined)


def justification_failure(d: Definition, interpretation: Structure, max_rules: int = DEFAULT_MAX_RULES):
    """First defined atom whose value differs from the well-founded model, or None."""
    w = justified_extension(d, interpretation, max_rules)
    for atom in w.atoms(d.defined):
        if w[atom] != interpretation[atom]:
            return atom, interpretation[atom], w[atom]
    return None


def sentence_ok(value: TruthValue, strict: bool = True) -> bool:
    return value is TruthValue.TRUE if strict else value is not TruthValue.FALSE


@dataclass(frozen=True)
class Verdict:
    status: str  # MODEL, NOT-MODEL or PARTIAL
    reason: str = ""
    justified: bool = False


def check(t: Theory, s: Structure, max_rules: int = DEFAULT_MAX_RULES, strict: bool = True) -> Verdict:
    """Classify ``s`` as a model, a partial justified interpretation, or neither, with a reason."""
    s = s.check_vocabulary(t.vocabulary)
    total = s.is_total(t.vocabulary.predicates)
    for i, d in enumerate(t.definitions, 1):
        failure = justification_failure(d, s, max_rules)
        if failure is not None:
            atom, have, want = failure
            return Verdict(
                "NOT-MODEL",
                f"definition {i} ({', '.join(d.defined)}) is not justified: "
                f"{atom} is {have} but the well-founded model makes it {want}",
            )
    for i, f in enumerate(t.sentences, 1):
        v = eval_formula(f, s)
        if not sentence_ok(v, strict):
            return Verdict("NOT-MODEL", f"axiom {i} evaluates to {v}", justified=True)
    if not total:
        missing = next(iter(s.unknown_atoms(t.vocabulary.predicates)))
        return Verdict("PARTIAL", f"justified interpretation, but {missing} is unknown", justified=True)
    return Verdict("MODEL", "", justified=True)


def is_justified_theory(t: Theory, s: Structure, max_rules: int = DEFAULT_MAX_RULES, strict: bool = True) -> bool:
    return check(t, s, max_rules, strict).justified


def is_model(t: Theory, s: Structure, max_rules: int = DEFAULT_MAX_RULES, strict: bool = True) -> bool:
    s = s.check_vocabulary(t.vocabulary)
    if not s.is_total(t.vocabulary.predicates):
        raise NotTotalError("a model must be total; use check() for partial interpretations")
    return check(t, s, max_rules, strict).status == "MODEL"


# -- model enumeration -------------------------------------------------------


def enumerate_models(
    t: Theory,
    template: Structure,
    max_nodes: int = DEFAULT_MAX_NODES,
    max_rules: int = DEFAULT_MAX_RULES,
) -> Iterator[Structure]:
    """Total completions of ``template`` that are models of ``t``.

    Depth-first search over the unknown atoms (false before true, atoms in
    canonical order).  After every choice each definition whose occurring
    open predicates are all decided is replaced by its justified extension,
    and sentences that already evaluate to false prune the branch.
    """
    s0 = template.check_vocabulary(t.vocabulary)
    defs = list(t.definitions)
    opens = [sorted(d.open_predicates()) for d in defs]
    defined_anywhere = t.defined_predicates()
    preds = sorted(t.vocabulary.predicates)
    free_first = [p for p in preds if p not in defined_anywhere] + [p for p in preds if p in defined_anywhere]
    nodes = 0

    def propagate(s: Structure, fired: frozenset):
        progress = True
        while progress:
            progress = False
            for i, d in enumerate(defs):
                if i in fired or not s.is_total(opens[i]):
                    continue
                w = justified_extension(d, s, max_rules)
                if not w.is_total(d.defined):
                    return None
                updates = {}
                for p in d.defined:
                    have = s.tables[p]
                    for args, v in w.tables[p].items():
                        cur = have.get(args)
                        if cur is None:
                            updates[GroundAtom(p, args)] = v
                        elif cur != v:
                            return None
                if updates:
                    s = s.with_values(updates)
                fired = fired | {i}
                progress = True
        for f in t.sentences:
            if eval_formula(f, s) is TruthValue.FALSE:
                return None
        return s, fired

    def pick(s: Structure):
        for p in free_first:
            if len(s.tables[p]) < len(s.domain) ** s.arities[p]:
                for args in s.tuples(s.arities[p]):
                    if args not in s.tables[p]:
                        return GroundAtom(p, args)
        return None

    def search(s: Structure, fired: frozenset):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise LimitExceeded(f"model search exceeds {max_nodes} nodes")
        r = propagate(s, fired)
        if r is None:
            return
        s, fired = r
        atom = pick(s)
        if atom is None:
            if len(fired) == len(defs) and all(eval_formula(f, s) is TruthValue.TRUE for f in t.sentences):
                yield s
            return
        for v in (TruthValue.FALSE, TruthValue.TRUE):
            yield from search(s.with_values({atom: v}), fired)

    yield from search(s0, frozenset())


def enumerate_models_naive(
    t: Theory, template: Structure, max_nodes: int = DEFAULT_MAX_NODES, max_rules: int = DEFAULT_MAX_RULES
) -> Iterator[Structure]:
    """Generate-and-test reference for ``enumerate_models``."""
    s0 = template.check_vocabulary(t.vocabulary)
    unknown = s0.unknown_atoms(t.vocabulary.predicates)
    if 2 ** len(unknown) > max_nodes:
        raise LimitExceeded(f"{2 ** len(unknown)} completions exceed {max_nodes}")
    for combo in itertools.product((TruthValue.FALSE, TruthValue.TRUE), repeat=len(unknown)):
        s = s0.with_values(dict(zip(unknown, combo)))
        if is_model(t, s, max_rules):
            yield s


# -- literal-set programs ----------------------------------------------------


def literal_well_founded_model(lg: LiteralGroundDefinition) -> Structure:
    """Well-founded model of a literal-set definition by the alternating fixpoint."""
    atoms = list(lg.defined_atoms)
    index = {a: i for i, a in enumerate(atoms)}
    rules = []
    for head, body in lg.rules:
        pos = [index[a] for a, sign in body if sign]
        neg = [index[a] for a, sign in body if not sign]
        rules.append((index[head], pos, neg))

    def gamma(assumed: set) -> set:
        # least model of the reduct w.r.t. the two-valued set ``assumed``
        active = [(h, pos) for h, pos, neg in rules if not any(n in assumed for n in neg)]
        derived: set = set()
        changed = True
        while changed:
            changed = False
            for h, pos in active:
                if h not in derived and all(p in derived for p in pos):
                    derived.add(h)
                    changed = True
        return derived

    true: set = set()
    while True:
        possible = gamma(true)
        nxt = gamma(possible)
        if nxt == true:
            break
        true = nxt
    values = {}
    for i, a in enumerate(atoms):
        values[a] = TruthValue.TRUE if i in true else TruthValue.UNKNOWN if i in possible else TruthValue.FALSE
    return lg.base.with_values(values)

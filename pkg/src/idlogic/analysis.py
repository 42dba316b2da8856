"""Static and semantic analysis of definitions.

Dependency graphs and the syntactic classes (non-recursive, positive
recursive, stratified), the relativized-definition shape check, the
well-foundedness test over a finite structure, the well-defining check and
theory splitting.

Well-foundedness is tested by layered extraction: repeatedly take every
remaining atom all of whose rule bodies have a value that does not depend on
the atoms outside the layers built so far.  If any witness order exists the
extraction succeeds: the minimal atoms of that order qualify for the first
layer, and the property "body is decided by the atoms in L" only gets easier
as L grows, so by induction every atom is eventually extracted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .engine import CompiledDefinition, _eval, justified_extension, node_atoms
from .errors import LimitExceeded
from .grounder import DEFAULT_MAX_RULES, ground_definition
from .structures import Structure
from .syntax import (
    And,
    Atom,
    Definition,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Theory,
    Var,
    predicates_of,
)

POSITIVE, NEGATIVE = "+", "-"


def occurrences(f: Formula, negated: bool = False):
    """Yield (predicate, sign) for each atom occurrence; ``<=>`` operands count with both signs."""
    if isinstance(f, Atom):
        yield f.pred, NEGATIVE if negated else POSITIVE
    elif isinstance(f, Not):
        yield from occurrences(f.body, not negated)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from occurrences(a, negated)
    elif isinstance(f, Implies):
        yield from occurrences(f.left, not negated)
        yield from occurrences(f.right, negated)
    elif isinstance(f, Iff):
        for side in (f.left, f.right):
            yield from occurrences(side, negated)
            yield from occurrences(side, not negated)
    elif isinstance(f, (Forall, Exists)):
        yield from occurrences(f.body, negated)


@dataclass
class SignedDependencyGraph:
    nodes: tuple
    edges: frozenset  # (from, to, sign): `from` occurs with `sign` in a body of a rule for `to`

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((a, b) for a, b, _ in self.edges)
        return g


def dependency_graph(d: Definition) -> SignedDependencyGraph:
    defined = set(d.defined)
    edges = set()
    for r in d.rules:
        for pred, sign in occurrences(r.body):
            if pred in defined:
                edges.add((pred, r.head_pred, sign))
    return SignedDependencyGraph(tuple(d.defined), frozenset(edges))


@dataclass
class DefinitionClass:
    non_recursive: bool
    positive_recursive: bool
    stratified: bool
    relativized: str | None = None

    @property
    def unclassified(self) -> bool:
        return not (self.stratified or self.relativized)

    def flags(self) -> list:
        out = [
            name
            for name, on in (
                ("non-recursive", self.non_recursive),
                ("positive-recursive", self.positive_recursive),
                ("stratified", self.stratified),
            )
            if on
        ]
        if self.relativized:
            out.append(f"relativized({self.relativized})")
        if self.unclassified:
            out.append("unclassified")
        return out


def strata(d: Definition) -> list | None:
    """Defined predicates grouped into strata, lowest first; None if not stratified."""
    graph = dependency_graph(d)
    cond = nx.condensation(graph.to_networkx())
    comp_of = cond.graph["mapping"]
    for a, b, sign in graph.edges:
        if sign == NEGATIVE and comp_of[a] == comp_of[b]:
            return None
    order = list(nx.lexicographical_topological_sort(cond, key=lambda n: min(cond.nodes[n]["members"])))
    return [sorted(cond.nodes[n]["members"]) for n in order]


def classify(d: Definition, order_pred: str | None = None) -> DefinitionClass:
    graph = dependency_graph(d)
    non_recursive = not graph.edges
    positive = all(sign == POSITIVE for _, _, sign in graph.edges)
    stratified = strata(d) is not None
    rel = order_pred if order_pred and check_relativized(d, order_pred) else None
    return DefinitionClass(non_recursive, positive, stratified, rel)


# -- relativized definitions -------------------------------------------------


def _guard_var(f: Formula, order_pred: str, x: str):
    """If ``f`` is ``! z : z<x => G`` or ``? z : z<x & G``, return (z, G)."""
    if isinstance(f, Forall) and isinstance(f.body, Implies):
        guard, rest = f.body.left, f.body.right
    elif isinstance(f, Exists) and isinstance(f.body, And) and f.body.args:
        guard = f.body.args[0]
        rest = f.body.args[1] if len(f.body.args) == 2 else And(f.body.args[1:])
    else:
        return None
    if (
        isinstance(guard, Atom)
        and guard.pred == order_pred
        and guard.args == (Var(f.var), Var(x))
        and f.var != x
    ):
        return f.var, rest
    return None


def _relativized_ok(f: Formula, defined: set, order_pred: str, x: str, guarded: frozenset) -> bool:
    guard = _guard_var(f, order_pred, x)
    if guard is not None:
        z, rest = guard
        return _relativized_ok(rest, defined, order_pred, x, guarded | {z})
    if isinstance(f, Atom):
        if f.pred not in defined:
            return True
        return bool(f.args) and isinstance(f.args[0], Var) and f.args[0].name in guarded
    if isinstance(f, Not):
        return _relativized_ok(f.body, defined, order_pred, x, guarded)
    if isinstance(f, (And, Or)):
        return all(_relativized_ok(a, defined, order_pred, x, guarded) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return _relativized_ok(f.left, defined, order_pred, x, guarded) and _relativized_ok(
            f.right, defined, order_pred, x, guarded
        )
    if isinstance(f, (Forall, Exists)):
        if f.var == x:
            return not (predicates_of(f.body) & defined)
        return _relativized_ok(f.body, defined, order_pred, x, guarded - {f.var})
    return True


def check_relativized(d: Definition, order_pred: str) -> bool:
    """Every rule is ``p(X, ..) <- F`` with each defined atom ``q(Z, ..)`` under a guard on ``Z < X``."""
    defined = set(d.defined)
    if order_pred in defined:
        return False
    for r in d.rules:
        if not r.head_args or not isinstance(r.head_args[0], Var):
            return False
        if not _relativized_ok(r.body, defined, order_pred, r.head_args[0].name, frozenset()):
            return False
    return True


# -- well-foundedness --------------------------------------------------------


@dataclass
class WellFoundedResult:
    ok: bool
    layers: list = field(default_factory=list)  # lists of GroundAtom, lowest layer first
    stuck: list = field(default_factory=list)  # atoms that could not be ordered

    def __bool__(self) -> bool:
        return self.ok


def _decided_by(body: tuple, lower: set, cap: int) -> bool:
    """True iff the body's Kleene value is the same in all interpretations agreeing on ``lower`` atoms."""
    node, _ = body
    atoms = node_atoms(node)
    fixed = sorted(atoms & lower)
    free = sorted(atoms - lower)
    if not free:
        return True
    if 3 ** len(fixed) * (2 ** len(free) + 1) > cap:
        raise LimitExceeded("well-foundedness check: body has too many atoms to enumerate")
    size = max(atoms) + 1
    for combo in itertools.product((0, 1, 2), repeat=len(fixed)):
        vals = [1] * size
        for i, v in zip(fixed, combo):
            vals[i] = v
        base = _eval(node, vals, vals)
        if base != 1:
            continue  # precision monotonicity: every refinement keeps this value
        for total in itertools.product((0, 2), repeat=len(free)):
            for i, v in zip(free, total):
                vals[i] = v
            if _eval(node, vals, vals) != 1:
                return False
    return True


def check_well_founded(
    d: Definition, s: Structure, max_rules: int = DEFAULT_MAX_RULES, cap: int = 10**6
) -> WellFoundedResult:
    """Look for a well-founded order on the defined atoms over the open part of ``s``."""
    c = CompiledDefinition(ground_definition(d, s, max_rules))
    remaining = set(range(len(c.atoms)))
    lower: set = set()
    layers = []
    while remaining:
        layer = [i for i in sorted(remaining) if all(_decided_by(b, lower, cap) for b in c.bodies[i])]
        if not layer:
            return WellFoundedResult(False, layers, [c.atoms[i] for i in sorted(remaining)])
        layers.append([c.atoms[i] for i in layer])
        lower |= set(layer)
        remaining -= set(layer)
    return WellFoundedResult(True, layers)


def check_well_defining(d: Definition, opens, max_rules: int = DEFAULT_MAX_RULES):
    """(True, None) if every justified extension is total, else (False, first partial extension)."""
    for s in opens:
        w = justified_extension(d, s, max_rules)
        if not w.is_total(d.defined):
            return False, w
    return True, None


# -- splitting and hierarchies -----------------------------------------------


def _definition_graph(defs: list) -> nx.DiGraph:
    """Edge i -> j when definition j mentions a predicate defined by definition i."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(defs)))
    for i, di in enumerate(defs):
        for j, dj in enumerate(defs):
            if i != j and set(di.defined) & dj.predicates():
                g.add_edge(i, j)
    return g


def split_theory(t: Theory, singletons: bool = False) -> list | None:
    """Finest sequence T1..Tn where predicates defined in Ti do not appear in earlier parts.

    Definitions that depend on each other cyclically share a part.  With
    ``singletons`` the split must put every definition in its own part, and
    None is returned when cycles prevent that.
    """
    defs = list(t.definitions)
    g = _definition_graph(defs)
    cond = nx.condensation(g)
    order = list(nx.lexicographical_topological_sort(cond, key=lambda n: min(cond.nodes[n]["members"])))
    groups = [sorted(cond.nodes[n]["members"]) for n in order]
    if singletons and any(len(grp) > 1 for grp in groups):
        return None
    layer_of_pred = {}
    for k, grp in enumerate(groups):
        for i in grp:
            for p in defs[i].defined:
                layer_of_pred[p] = k
    sentences: list = [[] for _ in groups] or [[]]
    for f in t.sentences:
        k = max((layer_of_pred.get(p, 0) for p in predicates_of(f)), default=0)
        sentences[k].append(f)
    if not groups:
        return [Theory(t.vocabulary, sentences[0], ())]
    return [Theory(t.vocabulary, sentences[k], [defs[i] for i in grp]) for k, grp in enumerate(groups)]


def is_hierarchy(defs) -> bool:
    """Each predicate defined at most once, and no open predicate is defined by a later definition."""
    seen: set = set()
    for d in defs:
        if seen & set(d.defined):
            return False
        seen |= set(d.defined)
    return nx.is_directed_acyclic_graph(_definition_graph(list(defs)))

"""Concrete syntax for ID-logic theories: tokenizer, recursive-descent parser, printer.

Grammar (``//`` starts a comment)::

    theory  := item*
    item    := 'vocab' '{' decl* '}'
             | 'define' NAME (',' NAME)* '{' rule* '}'
             | 'axiom' formula '.'
             | '<-' formula '.'                    (denial, sugar for ~(? X.. : formula))
    decl    := 'const' NAME, .. '.' | 'func' NAME/N, .. '.' | 'pred' NAME/N, .. '.'
    rule    := atom ['<-' formula] '.'

Formula operators, tightest first: ``~``, ``&``, ``|``, ``=>`` (right
associative), ``<=>``.  Quantifiers ``! X, Y : F`` and ``? X : F`` extend as
far right as possible.  A name is a variable when it is bound by an enclosing
quantifier, or when it is undeclared and starts with an upper-case letter or
an underscore.  ``@name`` is a domain element, ``$Name`` a schematic formula
variable (substitution patterns only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ArityError, ParseError, UndeclaredSymbolError
from .syntax import (
    FALSE,
    TRUE,
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
    Rule,
    Term,
    Theory,
    Truth,
    Var,
    Vocabulary,
    exists,
    free_vars,
    free_vars_in_order,
)

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<op><=>|<-|=>|->|!=|[~&|!?:(){},.=/$@])"
    r"|(?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)"
)

RESERVED = {"true", "false"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'op', 'name' or 'eof'
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind in ("op", "name"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def is_variable_name(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


class _VocabBuilder:
    """Mutable vocabulary used during parsing; in infer mode unknown symbols are recorded."""

    def __init__(self, base: Vocabulary | None, infer: bool):
        base = base or Vocabulary()
        self.constants = set(base.constants)
        self.functions = dict(base.functions)
        self.predicates = dict(base.predicates)
        self.infer = infer

    def kind(self, name):
        if name in self.constants:
            return "const"
        if name in self.functions:
            return "func"
        if name in self.predicates:
            return "pred"
        return None

    def declare(self, name, kind, arity, tok):
        known = self.kind(name)
        if known is not None and known != kind:
            raise ParseError(f"{name} already declared as {known}", tok.line, tok.column)
        if kind == "const":
            self.constants.add(name)
            return
        table = self.functions if kind == "func" else self.predicates
        if table.get(name, arity) != arity:
            raise ArityError(f"{name} declared with arity {table[name]}, used with {arity}", tok.line, tok.column)
        if kind == "func" and arity < 1:
            raise ArityError(f"function {name} needs arity >= 1", tok.line, tok.column)
        table[name] = arity

    def freeze(self) -> Vocabulary:
        return Vocabulary(self.constants, self.functions, self.predicates)


class Parser:
    def __init__(self, text: str, vocabulary: Vocabulary | None = None, infer: bool = False):
        self.tokens = tokenize(text)
        self.pos = 0
        self.vocab = _VocabBuilder(vocabulary, infer)

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def expect_name(self) -> Token:
        if self.tok.kind != "name":
            self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def error(self, message, tok=None, cls=ParseError):
        tok = tok or self.tok
        raise cls(message, tok.line, tok.column)

    def done(self) -> bool:
        return self.tok.kind == "eof"

    # -- theory level

    def parse_theory(self) -> Theory:
        sentences, definitions = [], []
        while not self.done():
            if self.at("vocab"):
                self.parse_vocab_block()
            elif self.at("define"):
                definitions.append(self.parse_definition())
            elif self.at("axiom"):
                start = self.advance()
                f = self.parse_formula()
                self.expect(".")
                fv = free_vars(f)
                if fv:
                    self.error(f"sentence has free variables {sorted(fv)}", start)
                sentences.append(f)
            elif self.at("<-"):
                self.advance()
                body = self.parse_formula()
                self.expect(".")
                sentences.append(denial(body))
            else:
                self.error(f"expected 'vocab', 'define', 'axiom' or '<-', found {self.tok.text!r}")
        return Theory(self.vocab.freeze(), sentences, definitions)

    def parse_vocab_block(self) -> None:
        self.expect("vocab")
        self.expect("{")
        while not self.at("}"):
            kw = self.expect_name()
            if kw.text not in ("const", "func", "pred"):
                self.error(f"expected 'const', 'func' or 'pred', found {kw.text!r}", kw)
            while True:
                name = self.expect_name()
                if name.text in RESERVED:
                    self.error(f"{name.text} is reserved", name)
                if kw.text == "const":
                    self.vocab.declare(name.text, "const", 0, name)
                else:
                    self.expect("/")
                    arity_tok = self.expect_name()
                    if not arity_tok.text.isdigit():
                        self.error("arity must be a number", arity_tok)
                    self.vocab.declare(name.text, kw.text, int(arity_tok.text), name)
                if not self.at(","):
                    break
                self.advance()
            self.expect(".")
        self.expect("}")

    def parse_definition(self) -> Definition:
        self.expect("define")
        defined = []
        while True:
            name = self.expect_name()
            if self.vocab.kind(name.text) != "pred" and not self.vocab.infer:
                self.error(f"undeclared predicate {name.text}", name, UndeclaredSymbolError)
            defined.append(name.text)
            if not self.at(","):
                break
            self.advance()
        self.expect("{")
        rules = []
        while not self.at("}"):
            start = self.tok
            rule = self.parse_rule()
            if rule.head_pred not in defined:
                self.error(f"rule head {rule.head_pred} is not defined by this block", start)
            rules.append(rule)
        self.expect("}")
        return Definition(tuple(defined), tuple(rules))

    def parse_rule(self) -> Rule:
        head_tok = self.tok
        head = self.parse_atom_or_equality(scope=frozenset())
        if not isinstance(head, Atom):
            self.error("rule head must be an atom", head_tok)
        body = TRUE
        if self.at("<-"):
            self.advance()
            body = self.parse_formula()
        self.expect(".")
        return Rule(head.pred, head.args, body)

    # -- formulas

    def parse_formula(self, scope=frozenset()) -> Formula:
        left = self.parse_implication(scope)
        while self.at("<=>"):
            self.advance()
            left = Iff(left, self.parse_implication(scope))
        return left

    def parse_implication(self, scope) -> Formula:
        left = self.parse_disjunction(scope)
        if self.at("=>"):
            self.advance()
            return Implies(left, self.parse_implication(scope))
        return left

    def parse_disjunction(self, scope) -> Formula:
        parts = [self.parse_conjunction(scope)]
        while self.at("|"):
            self.advance()
            parts.append(self.parse_conjunction(scope))
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_conjunction(self, scope) -> Formula:
        parts = [self.parse_unary(scope)]
        while self.at("&"):
            self.advance()
            parts.append(self.parse_unary(scope))
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self, scope) -> Formula:
        if self.at("~"):
            self.advance()
            return Not(self.parse_unary(scope))
        if self.at("!") or self.at("?"):
            quant = Forall if self.advance().text == "!" else Exists
            names = [self.expect_name().text]
            while self.at(","):
                self.advance()
                names.append(self.expect_name().text)
            self.expect(":")
            body = self.parse_formula(scope | set(names))
            for name in reversed(names):
                body = quant(name, body)
            return body
        if self.at("("):
            self.advance()
            f = self.parse_formula(scope)
            self.expect(")")
            return f
        if self.at("$"):
            self.advance()
            return Meta(self.expect_name().text)
        if self.tok.kind == "name" and self.tok.text in RESERVED:
            return TRUE if self.advance().text == "true" else FALSE
        return self.parse_atom_or_equality(scope)

    def _is_term_ahead(self) -> bool:
        """Look past a name (and its argument list) for '=' or '!='."""
        if self.at("@"):
            return True
        i = self.pos + 1
        if self.tokens[i].text == "(" and self.tokens[i].kind == "op":
            depth = 0
            while True:
                t = self.tokens[i]
                if t.kind == "eof":
                    return False
                if t.kind == "op" and t.text == "(":
                    depth += 1
                elif t.kind == "op" and t.text == ")":
                    depth -= 1
                    if depth == 0:
                        break
                i += 1
            i += 1
        return self.tokens[i].kind == "op" and self.tokens[i].text in ("=", "!=")

    def parse_atom_or_equality(self, scope) -> Formula:
        if self._is_term_ahead():
            left = self.parse_term(scope)
            op = self.advance()
            right = self.parse_term(scope)
            eq = Eq(left, right)
            return eq if op.text == "=" else Not(eq)
        name = self.expect_name()
        args = ()
        if self.at("("):
            args = self.parse_args(scope)
        kind = self.vocab.kind(name.text)
        if kind == "pred":
            if self.vocab.predicates[name.text] != len(args):
                self.error(
                    f"predicate {name.text} has arity {self.vocab.predicates[name.text]}, used with {len(args)}",
                    name,
                    ArityError,
                )
        elif kind is None and self.vocab.infer:
            self.vocab.declare(name.text, "pred", len(args), name)
        elif kind is None:
            self.error(f"undeclared predicate {name.text}", name, UndeclaredSymbolError)
        else:
            self.error(f"{name.text} is a {kind}, not a predicate", name)
        return Atom(name.text, args)

    def parse_args(self, scope) -> tuple:
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.parse_term(scope))
            while self.at(","):
                self.advance()
                args.append(self.parse_term(scope))
        self.expect(")")
        return tuple(args)

    def parse_term(self, scope) -> Term:
        if self.at("@"):
            self.advance()
            return Elem(self.expect_name().text)
        name = self.expect_name()
        if name.text in RESERVED:
            self.error(f"{name.text} cannot be used as a term", name)
        if self.at("("):
            args = self.parse_args(scope)
            kind = self.vocab.kind(name.text)
            if kind is None and self.vocab.infer:
                self.vocab.declare(name.text, "func", len(args), name)
            elif kind != "func":
                cls = UndeclaredSymbolError if kind is None else ParseError
                self.error(f"undeclared function {name.text}" if kind is None else f"{name.text} is not a function", name, cls)
            elif self.vocab.functions[name.text] != len(args):
                self.error(
                    f"function {name.text} has arity {self.vocab.functions[name.text]}, used with {len(args)}",
                    name,
                    ArityError,
                )
            return App(name.text, args)
        if name.text in scope:
            return Var(name.text)
        kind = self.vocab.kind(name.text)
        if kind == "const":
            return Const(name.text)
        if kind is not None:
            self.error(f"{name.text} is a {kind}, not a constant", name)
        if is_variable_name(name.text):
            return Var(name.text)
        if self.vocab.infer:
            self.vocab.declare(name.text, "const", 0, name)
            return Const(name.text)
        self.error(f"undeclared constant {name.text}", name, UndeclaredSymbolError)


def denial(body: Formula) -> Formula:
    """``<- B`` as the sentence ``~(? X.. : B)`` over the free variables of B."""
    return Not(exists(free_vars_in_order(body), body))


def parse_theory(text: str) -> Theory:
    return Parser(text).parse_theory()


def parse_formula(text: str, vocabulary: Vocabulary | None = None, infer: bool = False) -> Formula:
    p = Parser(text, vocabulary, infer=infer or vocabulary is None)
    f = p.parse_formula()
    if not p.done():
        p.error(f"unexpected {p.tok.text!r} after formula")
    return f


def parse_formula_with_vocabulary(text: str, vocabulary: Vocabulary | None = None):
    """Parse in infer mode; return the formula and the (extended) vocabulary."""
    p = Parser(text, vocabulary, infer=True)
    f = p.parse_formula()
    if not p.done():
        p.error(f"unexpected {p.tok.text!r} after formula")
    return f, p.vocab.freeze()


# -- printer -----------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _prec(f: Formula) -> int:
    if isinstance(f, (Forall, Exists)):
        return 0
    if isinstance(f, Not) and isinstance(f.body, Eq):
        return 6
    return _PREC.get(type(f), 6)


def render_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Elem):
        return f"@{t.value}"
    return f"{t.func}({', '.join(render_term(a) for a in t.args)})"


def _wrap(f: Formula, min_prec: int) -> str:
    text = render_formula(f)
    return f"({text})" if _prec(f) < min_prec else text


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(render_term(a) for a in f.args)})"
    if isinstance(f, Eq):
        return f"{render_term(f.left)} = {render_term(f.right)}"
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Meta):
        return f"${f.name}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{render_term(f.body.left)} != {render_term(f.body.right)}"
        return "~" + _wrap(f.body, 5)
    if isinstance(f, And):
        return " & ".join(_wrap(a, 5) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a, 4) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.left, 3)} => {_wrap(f.right, 2)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.left, 2)} <=> {_wrap(f.right, 2)}"
    if isinstance(f, (Forall, Exists)):
        q = "!" if isinstance(f, Forall) else "?"
        return f"{q} {f.var} : {render_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def render_rule(r: Rule) -> str:
    head = render_formula(Atom(r.head_pred, r.head_args))
    if r.body == TRUE:
        return f"{head}."
    return f"{head} <- {render_formula(r.body)}."


def render_definition(d: Definition, indent: str = "  ") -> str:
    lines = [f"define {', '.join(d.defined)} {{"]
    lines += [indent + render_rule(r) for r in d.rules]
    lines.append("}")
    return "\n".join(lines)


def render_vocabulary(v: Vocabulary) -> str:
    lines = ["vocab {"]
    if v.constants:
        lines.append(f"  const {', '.join(sorted(v.constants))}.")
    if v.functions:
        lines.append(f"  func {', '.join(f'{n}/{a}' for n, a in sorted(v.functions.items()))}.")
    if v.predicates:
        lines.append(f"  pred {', '.join(f'{n}/{a}' for n, a in sorted(v.predicates.items()))}.")
    if len(lines) == 1:
        return "vocab { }"
    lines.append("}")
    return "\n".join(lines)


def render_theory(t: Theory) -> str:
    blocks = [render_vocabulary(t.vocabulary)]
    blocks += [render_definition(d) for d in t.definitions]
    if t.sentences:
        blocks.append("\n".join(f"axiom {render_formula(s)}." for s in t.sentences))
    return "\n\n".join(blocks) + "\n"

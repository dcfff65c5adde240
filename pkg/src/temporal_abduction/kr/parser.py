"""Recursive-descent parser for theory text.

Grammar (tightest binding first: ``not``, ``&``, ``;``, ``=>``/``<=>``)::

    statement := 'fol' formula '.'
               | 'of' ident '::' dom (',' dom)* '->' dom '.'
               | '?-' formula '.'
               | atom ['<-' formula] '.'
    formula   := disj [('=>' | '<=>') disj]
    disj      := conj (';' conj)*
    conj      := unary ('&' unary)*
    unary     := 'not' unary | quant | primary
    quant     := ('exists' | 'forall') '(' Var (',' Var)* ')' '$' formula
    primary   := '(' formula ')' | 'true' | 'false' | term '=' term | atom

A quantifier's body runs to the end of the enclosing statement or
parenthesized group.  ``%`` starts a line comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..logic import (FALSE, TRUE, And, Atom, Equal, Equiv, Exists, Fn, Forall,
                     Implies, Not, Or, Rule, Var)
from .syntax import DefRule, FolAxiom, KRSyntaxError, OpenFuncDecl, QueryStmt

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*|\|phantom\{(?:[^{}]|\{[^{}]*\})*\})
  | (?P<punct><=>|<-|=>|->|::|\?-|[(),.&;=$])
  | (?P<int>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
""", re.VERBOSE)

_KEYWORDS = {"fol", "of", "not", "exists", "forall", "true", "false"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str = "<string>") -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise KRSyntaxError(f"unexpected character {text[pos]!r}", line,
                                pos - line_start + 1, source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str, source: str = "<string>"):
        self.source = source
        self.tokens = tokenize(text, source)
        self.i = 0
        self._anon = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token = None) -> KRSyntaxError:
        tok = tok or self.tok
        found = tok.text or "end of input"
        return KRSyntaxError(f"{msg} (found {found!r})", tok.line, tok.col, self.source)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    # -- statements

    def statements(self) -> list:
        out = []
        while self.tok.kind != "eof":
            out.append(self.statement())
        return out

    def statement(self):
        if self.accept("fol"):
            f = self.formula()
            self.expect(".")
            return FolAxiom(f)
        if self.accept("of"):
            return self.open_decl()
        if self.accept("?-"):
            f = self.formula()
            self.expect(".")
            return QueryStmt(f)
        head_tok = self.tok
        head = self.primary()
        if not isinstance(head, Atom):
            raise self.error("rule head must be an atom", head_tok)
        body = TRUE
        if self.accept("<-"):
            body = self.formula()
        self.expect(".")
        return DefRule(Rule(head, body))

    def open_decl(self) -> OpenFuncDecl:
        name = self.ident()
        self.expect("::")
        domain = [self.dom_item()]
        while self.accept(","):
            domain.append(self.dom_item())
        self.expect("->")
        rng = self.dom_item()
        self.expect(".")
        return OpenFuncDecl(name, tuple(domain), rng)

    def dom_item(self) -> str:
        name = self.ident()
        self.expect("(")
        if self.tok.kind != "var":
            raise self.error("expected a variable in open function signature")
        self.i += 1
        self.expect(")")
        return name

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in _KEYWORDS:
            raise self.error("expected an identifier")
        self.i += 1
        return t.text

    # -- formulas

    def formula(self):
        left = self.disj()
        if self.accept("=>"):
            return Implies(left, self.disj())
        if self.accept("<=>"):
            return Equiv(left, self.disj())
        return left

    def disj(self):
        parts = [self.conj()]
        while self.accept(";"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.accept("not"):
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            kind = Exists if self.tok.text == "exists" else Forall
            self.i += 1
            self.expect("(")
            names = [self.var_name()]
            while self.accept(","):
                names.append(self.var_name())
            close = self.expect(")")
            if len(set(names)) != len(names):
                raise self.error("duplicate quantified variable", close)
            self.expect("$")
            return kind(tuple(names), self.formula())
        return self.primary()

    def var_name(self) -> str:
        t = self.tok
        if t.kind != "var" or t.text == "_":
            raise self.error("expected a named variable")
        self.i += 1
        return t.text

    def primary(self):
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        start = self.tok
        t = self.term()
        if self.accept("="):
            return Equal(t, self.term())
        if isinstance(t, Var) or start.kind == "int":
            raise self.error("expected '=' after term")
        return Atom(t.functor, t.args)

    def term(self):
        t = self.tok
        if t.kind == "var":
            self.i += 1
            if t.text == "_":
                self._anon += 1
                return Var(f"_G{self._anon}")
            return Var(t.text)
        if t.kind == "int":
            self.i += 1
            return Fn(t.text)
        if t.kind == "ident" and t.text not in _KEYWORDS - {"of"}:
            self.i += 1
            if self.accept("("):
                args = [self.term()]
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
                return Fn(t.text, tuple(args))
            return Fn(t.text)
        raise self.error("expected a term")


def parse_statements(text: str, source: str = "<string>") -> list:
    return Parser(text, source).statements()


def parse_formula(text: str, source: str = "<query>"):
    """Parse a single formula; a trailing ``.`` is allowed."""
    p = Parser(text, source)
    f = p.formula()
    p.accept(".")
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return f


def parse_term(text: str, source: str = "<term>"):
    p = Parser(text, source)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return t

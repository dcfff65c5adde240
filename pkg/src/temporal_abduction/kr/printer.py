"""Render terms, formulas and statements back into theory syntax.

Output re-parses to the same structure: parentheses are inserted wherever
the fixed precedence (``not`` > ``&`` > ``;`` > ``=>``/``<=>``) or the
open-ended scope of quantifiers would otherwise change the reading.
"""

from __future__ import annotations

from ..logic import (And, Atom, Bottom, Equal, Equiv, Exists, Forall, Implies,
                     Not, Or, Rule, Top)

_PREC = {Implies: 1, Equiv: 1, Or: 2, And: 3, Not: 4}


def format_term(t) -> str:
    return str(t)


def _prec(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 0
    return _PREC.get(type(f), 5)


def format_formula(f) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return str(f)
    if isinstance(f, Equal):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        return f"not {_wrap(f.body, 3)}"
    if isinstance(f, And):
        return " & ".join(_wrap(p, 3) for p in f.parts)
    if isinstance(f, Or):
        return " ; ".join(_wrap(p, 2) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        kw = "exists" if isinstance(f, Exists) else "forall"
        return f"{kw}({','.join(f.vars)})$ {format_formula(f.body)}"
    if isinstance(f, (Implies, Equiv)):
        op = "=>" if isinstance(f, Implies) else "<=>"
        return f"{_wrap(f.left, 1)} {op} {_wrap(f.right, 1)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, threshold: int) -> str:
    # same-precedence children are parenthesized too, so nesting round-trips
    s = format_formula(f)
    return f"({s})" if _prec(f) <= threshold else s


def format_rule(r: Rule) -> str:
    return f"{r.head} <- {format_formula(r.body)}."


def format_statement(stmt) -> str:
    from .syntax import DefRule, FolAxiom, OpenFuncDecl, QueryStmt
    if isinstance(stmt, FolAxiom):
        return f"fol {format_formula(stmt.formula)}."
    if isinstance(stmt, DefRule):
        return format_rule(stmt.rule)
    if isinstance(stmt, OpenFuncDecl):
        dom = ", ".join(f"{d}(_)" for d in stmt.domain)
        return f"of {stmt.name}:: {dom} -> {stmt.range}(_)."
    if isinstance(stmt, QueryStmt):
        return f"?- {format_formula(stmt.formula)}."
    raise TypeError(f"not a statement: {stmt!r}")


def format_theory(theory) -> str:
    """Statements of ``theory`` in source syntax, one per line."""
    return "\n".join(format_statement(s) for s in theory.statements) + "\n"


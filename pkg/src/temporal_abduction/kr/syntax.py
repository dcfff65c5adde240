"""Statements of the theory language and the Theory container."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..logic import Atom, Formula, Rule


class TheoryError(Exception):
    """Base class for problems with theory text or structure."""


class KRSyntaxError(TheoryError):
    def __init__(self, message: str, line: int, column: int, source: str = "<string>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


class ArityError(TheoryError):
    def __init__(self, symbol: str, kind: str, first: int, second: int):
        super().__init__(f"{kind} '{symbol}' used with arity {first} and {second}")
        self.symbol = symbol


class OpenFunctionRedefinition(TheoryError):
    def __init__(self, symbol: str):
        super().__init__(f"rules given for declared open function '{symbol}'")
        self.symbol = symbol


@dataclass(frozen=True)
class FolAxiom:
    formula: Formula


@dataclass(frozen=True)
class DefRule:
    rule: Rule


@dataclass(frozen=True)
class OpenFuncDecl:
    name: str
    domain: tuple
    range: str

    def __post_init__(self):
        if not self.domain:
            raise TheoryError(f"open function '{self.name}' needs a nonempty domain")


@dataclass(frozen=True)
class QueryStmt:
    formula: Formula


@dataclass(frozen=True)
class Theory:
    """Parsed theory.

    ``definitions`` maps each defined predicate to its rules in textual
    order; ``open_predicates`` is filled in by classification.  Treat all
    containers as read-only.
    """

    statements: tuple = ()
    definitions: Mapping[str, tuple] = field(default_factory=dict)
    axioms: tuple = ()
    open_decls: tuple = ()
    open_predicates: frozenset = frozenset()
    arities: Mapping[str, int] = field(default_factory=dict)
    queries: tuple = ()

    def __add__(self, other: "Theory") -> "Theory":
        from .theory import build_theory
        return build_theory(self.statements + other.statements)

    def is_defined(self, pred: str) -> bool:
        return pred in self.definitions

    def is_open(self, pred: str) -> bool:
        return pred in self.open_predicates

    def rules_for(self, pred: str) -> tuple:
        return self.definitions.get(pred, ())

    def decl_for(self, pred: str) -> Optional[OpenFuncDecl]:
        for d in self.open_decls:
            if d.name == pred:
                return d
        return None


def rule_head(stmt: DefRule) -> Atom:
    return stmt.rule.head

"""The theory language: parsing, printing, classification and completion."""

from .parser import parse_formula, parse_statements, parse_term
from .printer import format_formula, format_rule, format_statement, format_term, format_theory
from .syntax import (ArityError, DefRule, FolAxiom, KRSyntaxError, OpenFuncDecl,
                     OpenFunctionRedefinition, QueryStmt, Theory, TheoryError)
from .theory import (all_axioms, build_theory, classify_predicates, completion,
                     expand_open_function, load_theory_files, parse_theory)

__all__ = [
    "ArityError", "DefRule", "FolAxiom", "KRSyntaxError", "OpenFuncDecl",
    "OpenFunctionRedefinition", "QueryStmt", "Theory", "TheoryError",
    "all_axioms", "build_theory", "classify_predicates", "completion",
    "expand_open_function", "format_formula", "format_rule", "format_statement",
    "format_term", "format_theory", "load_theory_files", "parse_formula",
    "parse_statements", "parse_term", "parse_theory",
]

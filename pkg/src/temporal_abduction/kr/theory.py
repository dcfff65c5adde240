"""Building theories: classification, completion, open-function expansion."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Union

from ..logic import (FALSE, And, Atom, Bottom, Equal, Equiv, Exists, Fn, Forall,
                     Implies, Not, Or, Rule, Top, Var, conj, disj, free_vars,
                     predicates, quantify, NameSource, apply_substitution)
from ..temporal import BUILTIN_PREDICATES
from .parser import parse_statements
from .syntax import (ArityError, DefRule, FolAxiom, OpenFuncDecl,
                     OpenFunctionRedefinition, QueryStmt, Theory, TheoryError)


def _collect_functors(t, table: dict):
    if isinstance(t, Fn):
        seen = table.setdefault(t.functor, len(t.args))
        if seen != len(t.args):
            raise ArityError(t.functor, "functor", seen, len(t.args))
        for a in t.args:
            _collect_functors(a, table)


def _walk_atoms(f, visit):
    if isinstance(f, Atom):
        visit(f)
    elif isinstance(f, Equal):
        visit(f)
    elif isinstance(f, Not):
        _walk_atoms(f.body, visit)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            _walk_atoms(p, visit)
    elif isinstance(f, (Exists, Forall)):
        _walk_atoms(f.body, visit)
    elif isinstance(f, (Implies, Equiv)):
        _walk_atoms(f.left, visit)
        _walk_atoms(f.right, visit)


def _check_arities(statements) -> dict:
    preds = dict(BUILTIN_PREDICATES)
    functors: dict = {}

    def note_pred(name, n):
        seen = preds.setdefault(name, n)
        if seen != n:
            raise ArityError(name, "predicate", seen, n)

    def visit(node):
        if isinstance(node, Atom):
            note_pred(node.pred, len(node.args))
            for a in node.args:
                _collect_functors(a, functors)
        else:
            _collect_functors(node.left, functors)
            _collect_functors(node.right, functors)

    for st in statements:
        if isinstance(st, (FolAxiom, QueryStmt)):
            _walk_atoms(st.formula, visit)
        elif isinstance(st, DefRule):
            visit(st.rule.head)
            _walk_atoms(st.rule.body, visit)
        elif isinstance(st, OpenFuncDecl):
            note_pred(st.name, len(st.domain) + 1)
            for d in st.domain:
                note_pred(d, 1)
            note_pred(st.range, 1)
    return preds


def build_theory(statements: Iterable) -> Theory:
    """Assemble statements into a classified :class:`Theory`."""
    statements = tuple(statements)
    arities = _check_arities(statements)
    definitions: dict = {}
    axioms, decls, queries = [], [], []
    for st in statements:
        if isinstance(st, DefRule):
            definitions.setdefault(st.rule.head.pred, []).append(st.rule)
        elif isinstance(st, FolAxiom):
            axioms.append(st.formula)
        elif isinstance(st, OpenFuncDecl):
            decls.append(st)
        elif isinstance(st, QueryStmt):
            queries.append(st.formula)
    for name in definitions:
        if name in BUILTIN_PREDICATES:
            raise TheoryError(f"built-in predicate '{name}' cannot be defined")
    for d in decls:
        if d.name in definitions:
            raise OpenFunctionRedefinition(d.name)
    theory = Theory(
        statements=statements,
        definitions={k: tuple(v) for k, v in definitions.items()},
        axioms=tuple(axioms),
        open_decls=tuple(decls),
        arities=arities,
        queries=tuple(queries),
    )
    return classify_predicates(theory)


def classify_predicates(t: Theory) -> Theory:
    """Mark every used, non-built-in predicate that heads no rule as open."""
    used = {}
    for st in t.statements:
        if isinstance(st, (FolAxiom, QueryStmt)):
            predicates(st.formula, used)
        elif isinstance(st, DefRule):
            predicates(st.rule.body, used)
    for d in t.open_decls:
        used.setdefault(d.name, len(d.domain) + 1)
        for p in d.domain + (d.range,):
            used.setdefault(p, 1)
    for d in t.open_decls:
        if d.name in t.definitions:
            raise OpenFunctionRedefinition(d.name)
    open_preds = frozenset(p for p in used
                           if p not in t.definitions and p not in BUILTIN_PREDICATES)
    return Theory(t.statements, t.definitions, t.axioms, t.open_decls,
                  open_preds, t.arities, t.queries)


def parse_theory(text: str, source: str = "<string>") -> Theory:
    return build_theory(parse_statements(text, source))


def load_theory_files(paths: Iterable[Union[str, Path]]) -> Theory:
    statements = []
    for p in paths:
        p = Path(p)
        statements.extend(parse_statements(p.read_text(encoding="utf-8"), str(p)))
    return build_theory(statements)


# ---------------------------------------------------------------------------
# Completion

def completion_vars(arity: int) -> tuple:
    return tuple(f"Z{i}" for i in range(1, arity + 1)) if arity > 1 else (("Z",) if arity else ())


def completion_body(head_vars: tuple, rules: Iterable[Rule], fresh: NameSource = None):
    """Disjunction of the rule bodies with head arguments equated to ``head_vars``.

    A head argument that is a variable not seen earlier in the same head is
    substituted rather than turned into an equality.
    """
    disjuncts = []
    taken = set(head_vars)
    for r in rules:
        local_names = list(free_vars(r.body)) + list(free_vars(r.head))
        ren = {}
        for n in dict.fromkeys(local_names):
            if n in taken:
                ren[n] = Var(fresh.fresh(n) if fresh else _avoid(n, taken, local_names))
        head = apply_substitution(ren, r.head) if ren else r.head
        body = apply_substitution(ren, r.body) if ren else r.body
        sub, eqs = {}, []
        for z, arg in zip(head_vars, head.args):
            if isinstance(arg, Var) and arg.name not in sub:
                sub[arg.name] = Var(z)
            else:
                eqs.append(Equal(Var(z), arg))
        if sub:
            body = apply_substitution(sub, body)
            eqs = [apply_substitution(sub, e) for e in eqs]
        parts = eqs + ([] if isinstance(body, Top) else [body])
        inner = conj(parts) if parts else body
        local = [n for n in free_vars(inner) if n not in head_vars]
        disjuncts.append(quantify(Exists, local, inner))
    return disj(disjuncts)


def _avoid(n: str, taken: set, others) -> str:
    i = 1
    while f"{n}_{i}" in taken or f"{n}_{i}" in others:
        i += 1
    taken.add(f"{n}_{i}")
    return f"{n}_{i}"


def completion(pred: str, rules: Iterable[Rule], arity: int = None):
    """Clark completion of the definition of ``pred``."""
    rules = tuple(rules)
    if arity is None:
        if not rules:
            raise ValueError("arity required when there are no rules")
        arity = len(rules[0].head.args)
    for r in rules:
        if r.head.pred != pred or len(r.head.args) != arity:
            raise ValueError(f"rule head {r.head} does not define {pred}/{arity}")
    zs = completion_vars(arity)
    atom = Atom(pred, tuple(Var(z) for z in zs))
    body = completion_body(zs, rules)
    if isinstance(body, Bottom) or body == FALSE:
        return quantify(Forall, zs, Not(atom))
    return quantify(Forall, zs, Equiv(atom, body))


# ---------------------------------------------------------------------------
# Open functions

def expand_open_function(d: OpenFuncDecl) -> tuple:
    """Totality, uniqueness and typing axioms for an open-function declaration."""
    n = len(d.domain)
    xs = tuple(f"X{i}" for i in range(1, n + 1)) if n > 1 else ("X",)
    args = tuple(Var(x) for x in xs)
    domain_facts = conj(Atom(p, (Var(x),)) for p, x in zip(d.domain, xs))
    totality = Forall(xs, Implies(domain_facts,
                                  Exists(("Y",), And((Atom(d.range, (Var("Y"),)),
                                                      Atom(d.name, args + (Var("Y"),)))))))
    uniqueness = Forall(xs + ("Y1", "Y2"), Implies(
        And((Atom(d.name, args + (Var("Y1"),)), Atom(d.name, args + (Var("Y2"),)))),
        Equal(Var("Y1"), Var("Y2"))))
    typing = Forall(xs + ("Y",), Implies(Atom(d.name, args + (Var("Y"),)), domain_facts))
    return totality, uniqueness, typing


def all_axioms(t: Theory) -> tuple:
    """Explicit axioms plus expanded open-function axioms, in statement order."""
    out = []
    for st in t.statements:
        if isinstance(st, FolAxiom):
            out.append(st.formula)
        elif isinstance(st, OpenFuncDecl):
            out.extend(expand_open_function(st))
    return tuple(out)

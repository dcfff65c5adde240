"""Reference implementations used only by the tests.

Each oracle is written from the definitions directly and shares no code
with the package beyond the formula data types.
"""

from __future__ import annotations

import itertools
import random

from temporal_abduction.logic import (And, Atom, Bottom, Equal, Equiv, Exists, Fn,
                                      Forall, Implies, Not, Or, Rule, Top, Var, conj)

# ---------------------------------------------------------------------------
# Calendar: count days one at a time


def is_leap(y: int) -> bool:
    return y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)


def month_length(y: int, m: int) -> int:
    if m == 2:
        return 29 if is_leap(y) else 28
    return 30 if m in (4, 6, 9, 11) else 31


def hours_between(a: tuple, b: tuple) -> int:
    """Hours from point ``a`` to point ``b`` (both ``(y, m, d, h)``, a <= b)."""
    y, m, d, h = a
    days = 0
    while (y, m, d) != b[:3]:
        d += 1
        if d > month_length(y, m):
            d, m = 1, m + 1
            if m > 12:
                m, y = 1, y + 1
        days += 1
    return days * 24 + b[3] - h


# ---------------------------------------------------------------------------
# Finite Herbrand evaluation of function-free formulas


def evaluate(f, interp: set, domain: tuple, env: dict = None) -> bool:
    """Truth of ``f`` where ``interp`` is the set of true ground atoms
    (as ``(pred, args)`` tuples of constant names) and quantifiers range
    over ``domain``."""
    env = env or {}

    def val(t):
        if isinstance(t, Var):
            return env[t.name]
        return t.functor

    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        return (f.pred, tuple(val(a) for a in f.args)) in interp
    if isinstance(f, Equal):
        return val(f.left) == val(f.right)
    if isinstance(f, Not):
        return not evaluate(f.body, interp, domain, env)
    if isinstance(f, And):
        return all(evaluate(p, interp, domain, env) for p in f.parts)
    if isinstance(f, Or):
        return any(evaluate(p, interp, domain, env) for p in f.parts)
    if isinstance(f, Implies):
        return (not evaluate(f.left, interp, domain, env)) or evaluate(f.right, interp, domain, env)
    if isinstance(f, Equiv):
        return evaluate(f.left, interp, domain, env) == evaluate(f.right, interp, domain, env)
    if isinstance(f, (Exists, Forall)):
        combos = itertools.product(domain, repeat=len(f.vars))
        results = (evaluate(f.body, interp, domain, {**env, **dict(zip(f.vars, c))})
                   for c in combos)
        return any(results) if isinstance(f, Exists) else all(results)
    raise TypeError(f)


def rule_consequences(rules, base: set, domain: tuple, order: list) -> set:
    """Extensions of the defined predicates of a non-recursive program,
    computed predicate by predicate in dependency ``order`` by grounding
    each rule over ``domain``."""
    interp = set(base)
    for pred in order:
        new = set()
        for r in rules:
            if r.head.pred != pred:
                continue
            names = sorted(_vars_of_rule(r))
            for combo in itertools.product(domain, repeat=len(names)):
                env = dict(zip(names, combo))
                if evaluate(r.body, interp, domain, env):
                    new.add((pred, tuple(env[a.name] if isinstance(a, Var) else a.functor
                                         for a in r.head.args)))
        interp |= new
    return interp


def _vars_of_rule(r: Rule) -> set:
    out = set()

    def go(x, bound=frozenset()):
        if isinstance(x, Var):
            if x.name not in bound:
                out.add(x.name)
        elif isinstance(x, Fn):
            for a in x.args:
                go(a, bound)
        elif isinstance(x, Atom):
            for a in x.args:
                go(a, bound)
        elif isinstance(x, Equal):
            go(x.left, bound)
            go(x.right, bound)
        elif isinstance(x, Not):
            go(x.body, bound)
        elif isinstance(x, (And, Or)):
            for p in x.parts:
                go(p, bound)
        elif isinstance(x, (Exists, Forall)):
            go(x.body, bound | set(x.vars))

    go(r.head)
    go(r.body)
    return out


def random_program(rng: random.Random):
    """A random non-recursive program over at most 3 constants.

    Returns ``(rules, base_facts, domain, defined_order, arities)``.  Base
    predicates have fixed random extensions; defined predicates only refer
    to base predicates and to defined predicates earlier in the order.
    """
    domain = tuple(["a", "b", "c"][: rng.randint(1, 3)])
    base_arity = {"b1": rng.randint(0, 2), "b2": rng.randint(1, 2)}
    base = set()
    for p, n in base_arity.items():
        for args in itertools.product(domain, repeat=n):
            if rng.random() < 0.5:
                base.add((p, args))
    n_defined = rng.randint(1, 3)
    # keep the truth table small: total defined ground atoms <= 12
    arities = {}
    budget = 12
    for i in range(n_defined):
        choices = [n for n in (0, 1, 2) if len(domain) ** n <= budget - (n_defined - i - 1)]
        n = rng.choice(choices)
        arities[f"p{i + 1}"] = n
        budget -= len(domain) ** n
    order = list(arities)
    rules = []
    for i, p in enumerate(order):
        lower = dict(base_arity)
        lower.update({q: arities[q] for q in order[:i]})
        for _ in range(rng.randint(0, 3)):
            rules.append(_random_rule(rng, p, arities[p], lower, domain))
    return rules, base, domain, order, arities


def _random_term(rng, pool, domain):
    if rng.random() < 0.7:
        return Var(rng.choice(pool))
    return Fn(rng.choice(domain))


def _random_rule(rng, pred, arity, lower, domain) -> Rule:
    pool = ["X", "Y", "Z"]
    head = Atom(pred, tuple(_random_term(rng, pool, domain) for _ in range(arity)))
    lits = []
    for _ in range(rng.randint(0, 3)):
        kind = rng.random()
        if kind < 0.6:
            q = rng.choice(sorted(lower))
            a = Atom(q, tuple(_random_term(rng, pool, domain) for _ in range(lower[q])))
            lits.append(Not(a) if rng.random() < 0.3 else a)
        else:
            e = Equal(_random_term(rng, pool, domain), _random_term(rng, pool, domain))
            lits.append(Not(e) if rng.random() < 0.3 else e)
    body = conj(lits) if lits else Top()
    if rng.random() < 0.1:
        body = Bottom()
    return Rule(head, body)


def all_interpretations(atoms: list):
    for bits in itertools.product((False, True), repeat=len(atoms)):
        yield {a for a, b in zip(atoms, bits) if b}


# ---------------------------------------------------------------------------
# Interval constraints by exhaustive search


def relation(rel: str, a: tuple, b: tuple) -> bool:
    (sa, ea), (sb, eb) = a, b
    return {
        "overlap": sa < eb and sb < ea,
        "within": sb <= sa and ea <= eb,
        "before": ea <= sb,
        "meets": ea == sb,
    }[rel]


def satisfiable(constraints, n_intervals: int, top: int) -> bool:
    """Whether ``[(rel, i, j, positive), ...]`` over intervals ``0..n-1`` has
    a solution with integer endpoints in ``[0, top]``."""
    spans = [(s, e) for s in range(top + 1) for e in range(s + 1, top + 1)]
    for combo in itertools.product(spans, repeat=n_intervals):
        if all(relation(r, combo[i], combo[j]) == pos for r, i, j, pos in constraints):
            return True
    return False


# ---------------------------------------------------------------------------
# Propositional theories


def random_propositional(rng: random.Random):
    """Text of a small propositional theory with open atoms a..d."""
    opens = ["a", "b", "c", "d"][: rng.randint(2, 4)]
    defined = ["p", "q"][: rng.randint(0, 2)]
    lines = []

    def lit(pool):
        x = rng.choice(pool)
        return f"not {x}" if rng.random() < 0.35 else x

    for i, p in enumerate(defined):
        pool = opens + defined[:i]
        for _ in range(rng.randint(1, 2)):
            body = " & ".join(lit(pool) for _ in range(rng.randint(1, 2)))
            lines.append(f"{p} <- {body}.")
    for _ in range(rng.randint(1, 3)):
        pool = opens + defined
        clause = " ; ".join(lit(pool) for _ in range(rng.randint(1, 3)))
        lines.append(f"fol {clause}.")
    return "\n".join(lines), opens, defined


def completion_agrees(seed: int, completion) -> bool:
    """Whether ``completion`` (the function under test) has exactly one model
    over a random program, namely the rule-generated extensions."""
    rng = random.Random(seed)
    rules, base, domain, order, arities = random_program(rng)
    expected = rule_consequences(rules, base, domain, order)
    formulas = [completion(p, [r for r in rules if r.head.pred == p], arity=arities[p])
                for p in order]
    cells = [(p, args) for p in order for args in itertools.product(domain, repeat=arities[p])]
    models = []
    for interp in all_interpretations(cells):
        full = base | interp
        if all(evaluate(f, full, domain) for f in formulas):
            models.append(full)
    return models == [expected]

"""Terms, formulas, substitutions and unification.

Every functor is a constructor (unique names): two compound terms unify only
if they share functor and arity and their arguments unify.  Constants are
0-ary compounds.  All values are immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Fn:
    functor: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(a) for a in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Var, Fn]


def const(name: Union[str, int]) -> Fn:
    return Fn(str(name), ())


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def term_vars(t: Term, acc: Optional[dict] = None) -> dict:
    """Variable names of ``t`` in order of first occurrence (dict used as ordered set)."""
    if acc is None:
        acc = {}
    if isinstance(t, Var):
        acc.setdefault(t.name, None)
    else:
        for a in t.args:
            term_vars(a, acc)
    return acc


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True, slots=True)
class Equal:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    parts: tuple


@dataclass(frozen=True, slots=True)
class Or:
    parts: tuple


@dataclass(frozen=True, slots=True)
class Exists:
    vars: tuple
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    vars: tuple
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Equiv:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


TRUE = Top()
FALSE = Bottom()

Formula = Union[Atom, Equal, Not, And, Or, Exists, Forall, Implies, Equiv, Top, Bottom]


@dataclass(frozen=True, slots=True)
class Rule:
    head: Atom
    body: Formula = TRUE


def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def quantify(kind, names: Iterable[str], body: Formula) -> Formula:
    names = tuple(dict.fromkeys(names))
    if not names:
        return body
    return kind(names, body)


def free_vars(f, acc: Optional[dict] = None, bound: frozenset = frozenset()) -> dict:
    """Free variable names of a formula or term, in order of first occurrence."""
    if acc is None:
        acc = {}
    if isinstance(f, Var):
        if f.name not in bound:
            acc.setdefault(f.name, None)
    elif isinstance(f, (Fn, Atom)):
        for a in f.args:
            free_vars(a, acc, bound)
    elif isinstance(f, Equal):
        free_vars(f.left, acc, bound)
        free_vars(f.right, acc, bound)
    elif isinstance(f, Not):
        free_vars(f.body, acc, bound)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            free_vars(p, acc, bound)
    elif isinstance(f, (Exists, Forall)):
        free_vars(f.body, acc, bound | frozenset(f.vars))
    elif isinstance(f, (Implies, Equiv)):
        free_vars(f.left, acc, bound)
        free_vars(f.right, acc, bound)
    return acc


def predicates(f: Formula, acc: Optional[dict] = None) -> dict:
    """Map predicate symbol -> arity for every atom in ``f``."""
    if acc is None:
        acc = {}
    if isinstance(f, Atom):
        acc.setdefault(f.pred, len(f.args))
    elif isinstance(f, Not):
        predicates(f.body, acc)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            predicates(p, acc)
    elif isinstance(f, (Exists, Forall)):
        predicates(f.body, acc)
    elif isinstance(f, (Implies, Equiv)):
        predicates(f.left, acc)
        predicates(f.right, acc)
    return acc


# ---------------------------------------------------------------------------
# Fresh names

class NameSource:
    """Deterministic supply of variable names that cannot clash with parsed ones.

    Parsed variables never contain ``#``, so ``_#<n>`` is always fresh.
    """

    def __init__(self, prefix: str = "_#"):
        self.prefix = prefix
        self._counter = itertools.count(1)

    def fresh(self, hint: str = "") -> str:
        return f"{self.prefix}{next(self._counter)}"

    def __call__(self, hint: str = "") -> str:
        return self.fresh(hint)


# ---------------------------------------------------------------------------
# Substitutions and unification

Substitution = Mapping[str, Term]


def walk(t: Term, s: Substitution) -> Term:
    while isinstance(t, Var):
        nxt = s.get(t.name)
        if nxt is None:
            return t
        t = nxt
    return t


def resolve(t: Term, s: Substitution) -> Term:
    """Fully apply ``s`` to ``t`` (follows binding chains)."""
    t = walk(t, s)
    if isinstance(t, Var) or not t.args:
        return t
    # iterative post-order rebuild: terms built by unfolding can be deep
    out: list = []
    stack: list = [(t, False)]
    while stack:
        node, built = stack.pop()
        if built:
            n = len(node.args)
            args = tuple(out[len(out) - n:])
            del out[len(out) - n:]
            same = all(a is b for a, b in zip(args, node.args))
            out.append(node if same else Fn(node.functor, args))
            continue
        node = walk(node, s)
        if isinstance(node, Var) or not node.args:
            out.append(node)
            continue
        stack.append((node, True))
        stack.extend((a, False) for a in reversed(node.args))
    return out[0]


def occurs(name: str, t: Term, s: Substitution) -> bool:
    stack = [t]
    while stack:
        x = walk(stack.pop(), s)
        if isinstance(x, Var):
            if x.name == name:
                return True
        else:
            stack.extend(x.args)
    return False


def unify(t1: Term, t2: Term, s: Optional[Substitution] = None,
          prefer: Optional[Iterable[str]] = None) -> Optional[dict]:
    """Most general unifier of ``t1`` and ``t2`` extending ``s``, or ``None``.

    The result is triangular (bindings may mention other bound variables);
    use :func:`resolve` or :func:`apply_substitution` to read it.  When two
    unbound variables meet, a variable named in ``prefer`` is the one bound.
    """
    out = dict(s) if s else {}
    pref = frozenset(prefer) if prefer is not None else frozenset()
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a = walk(a, out)
        b = walk(b, out)
        if a == b:
            continue
        if isinstance(a, Var) and isinstance(b, Var):
            if b.name in pref and a.name not in pref:
                out[b.name] = a
            else:
                out[a.name] = b
            continue
        if isinstance(a, Var):
            if occurs(a.name, b, out):
                return None
            out[a.name] = b
            continue
        if isinstance(b, Var):
            if occurs(b.name, a, out):
                return None
            out[b.name] = a
            continue
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        stack.extend(zip(a.args, b.args))
    return out


def unify_args(xs: tuple, ys: tuple, s: Optional[Substitution] = None,
               prefer: Optional[Iterable[str]] = None) -> Optional[dict]:
    if len(xs) != len(ys):
        return None
    return unify(Fn("", tuple(xs)), Fn("", tuple(ys)), s, prefer)


def normalize_substitution(s: Substitution) -> dict:
    """Idempotent form of a triangular substitution."""
    out = {}
    for k in s:
        v = resolve(Var(k), s)
        if v != Var(k):
            out[k] = v
    return out


def _subst_range_vars(s: Mapping[str, Term]) -> set:
    names = set()
    for v in s.values():
        names.update(term_vars(v))
    return names


def apply_substitution(s: Substitution, f, names: Optional[NameSource] = None):
    """Apply ``s`` to a term or formula; bound variables are shielded and
    renamed when a substituted term would otherwise be captured."""
    if not s:
        return f
    if isinstance(f, (Var, Fn)):
        return resolve(f, s)
    return _apply_formula(f, s, names)


def _apply_formula(f, s, names):
    if isinstance(f, Atom):
        if not f.args:
            return f
        return Atom(f.pred, tuple(resolve(a, s) for a in f.args))
    if isinstance(f, Equal):
        return Equal(resolve(f.left, s), resolve(f.right, s))
    if isinstance(f, Not):
        return Not(_apply_formula(f.body, s, names))
    if isinstance(f, And):
        return And(tuple(_apply_formula(p, s, names) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_apply_formula(p, s, names) for p in f.parts))
    if isinstance(f, (Exists, Forall)):
        body_free = free_vars(f.body)
        # resolve against the whole of s first: s may be triangular
        inner = {k: resolve(v, s) for k, v in s.items()
                 if k not in f.vars and k in body_free}
        if not inner:
            return f
        clash = set(f.vars) & _subst_range_vars(inner)
        new_vars, body = f.vars, f.body
        if clash:
            src = names or NameSource("_C")
            ren = {v: src.fresh(v) for v in f.vars if v in clash}
            new_vars = tuple(ren.get(v, v) for v in f.vars)
            body = _apply_formula(body, {k: Var(v) for k, v in ren.items()}, names)
        return type(f)(new_vars, _apply_formula(body, inner, names))
    if isinstance(f, Implies):
        return Implies(_apply_formula(f.left, s, names), _apply_formula(f.right, s, names))
    if isinstance(f, Equiv):
        return Equiv(_apply_formula(f.left, s, names), _apply_formula(f.right, s, names))
    return f


def rename_apart(r: Rule, fresh: NameSource) -> Rule:
    """Copy of ``r`` with every variable (bound ones included) freshly named."""
    names = {}
    for n in free_vars(r.head):
        names.setdefault(n, fresh.fresh(n))
    for n in free_vars(r.body):
        names.setdefault(n, fresh.fresh(n))
    if not names and not _has_quantifier(r.body):
        return r
    sub = {k: Var(v) for k, v in names.items()}
    return Rule(_apply_formula(r.head, sub, fresh),
                _rename_bound(_apply_formula(r.body, sub, fresh), fresh))


def _has_quantifier(f) -> bool:
    if isinstance(f, (Exists, Forall)):
        return True
    if isinstance(f, Not):
        return _has_quantifier(f.body)
    if isinstance(f, (And, Or)):
        return any(_has_quantifier(p) for p in f.parts)
    if isinstance(f, (Implies, Equiv)):
        return _has_quantifier(f.left) or _has_quantifier(f.right)
    return False


def _rename_bound(f, fresh: NameSource):
    if isinstance(f, (Exists, Forall)):
        ren = {v: fresh.fresh(v) for v in f.vars}
        body = _apply_formula(f.body, {k: Var(v) for k, v in ren.items()}, fresh)
        return type(f)(tuple(ren[v] for v in f.vars), _rename_bound(body, fresh))
    if isinstance(f, Not):
        return Not(_rename_bound(f.body, fresh))
    if isinstance(f, And):
        return And(tuple(_rename_bound(p, fresh) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_rename_bound(p, fresh) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(_rename_bound(f.left, fresh), _rename_bound(f.right, fresh))
    if isinstance(f, Equiv):
        return Equiv(_rename_bound(f.left, fresh), _rename_bound(f.right, fresh))
    return f


# ---------------------------------------------------------------------------
# Negation normal form

def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negation down to atoms and equalities; eliminate ``=>`` and ``<=>``.

    Nested conjunctions (disjunctions) are flattened.
    """
    if isinstance(f, (Atom, Equal)):
        return Not(f) if negate else f
    if isinstance(f, Top):
        return FALSE if negate else TRUE
    if isinstance(f, Bottom):
        return TRUE if negate else FALSE
    if isinstance(f, Not):
        return to_nnf(f.body, not negate)
    if isinstance(f, (And, Or)):
        parts = [to_nnf(p, negate) for p in f.parts]
        as_and = isinstance(f, And) != negate
        return _flat(And if as_and else Or, parts)
    if isinstance(f, (Exists, Forall)):
        kind = type(f)
        if negate:
            kind = Forall if kind is Exists else Exists
        return kind(f.vars, to_nnf(f.body, negate))
    if isinstance(f, Implies):
        if negate:
            return _flat(And, [to_nnf(f.left), to_nnf(f.right, True)])
        return _flat(Or, [to_nnf(f.left, True), to_nnf(f.right)])
    if isinstance(f, Equiv):
        a, b = f.left, f.right
        if negate:
            return _flat(Or, [_flat(And, [to_nnf(a), to_nnf(b, True)]),
                              _flat(And, [to_nnf(a, True), to_nnf(b)])])
        return _flat(And, [_flat(Or, [to_nnf(a, True), to_nnf(b)]),
                           _flat(Or, [to_nnf(a), to_nnf(b, True)])])
    raise TypeError(f"not a formula: {f!r}")


def _flat(kind, parts) -> Formula:
    out = []
    for p in parts:
        if isinstance(p, kind):
            out.extend(p.parts)
        else:
            out.append(p)
    if kind is And:
        return And(tuple(out)) if len(out) != 1 else out[0]
    return Or(tuple(out)) if len(out) != 1 else out[0]


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return isinstance(f.body, (Atom, Equal))
    if isinstance(f, (Implies, Equiv)):
        return False
    if isinstance(f, (And, Or)):
        return all(is_nnf(p) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        return is_nnf(f.body)
    return True


# ---------------------------------------------------------------------------
# Alpha-equivalence

def canonical(f: Formula) -> Formula:
    """Rename bound variables to ``_B1, _B2, ...`` in order of binding."""
    counter = itertools.count(1)

    def go(g, env):
        if isinstance(g, (Var, Fn)):
            return _canon_term(g, env)
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(_canon_term(a, env) for a in g.args))
        if isinstance(g, Equal):
            return Equal(_canon_term(g.left, env), _canon_term(g.right, env))
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(p, env) for p in g.parts))
        if isinstance(g, (Exists, Forall)):
            env = dict(env)
            new = []
            for v in g.vars:
                env[v] = f"_B{next(counter)}"
                new.append(env[v])
            return type(g)(tuple(new), go(g.body, env))
        if isinstance(g, (Implies, Equiv)):
            return type(g)(go(g.left, env), go(g.right, env))
        return g

    return go(f, {})


def _canon_term(t, env):
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if not t.args:
        return t
    return Fn(t.functor, tuple(_canon_term(a, env) for a in t.args))


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    return canonical(f) == canonical(g)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Fn):
        for a in t.args:
            yield from subterms(a)

"""Independent verification of a generated model.

The checker shares no search code with the engine.  Open predicates are
read closed-world from the answer's extensions, defined predicates are
evaluated through their rules, and built-ins are decided on ground hour
pairs.  Quantifiers are evaluated by joining against the extensions; a
variable that no atom binds ranges over the active domain (every ground
term in the answer and the theory, plus every interval between two known
time points).
"""

from __future__ import annotations

from itertools import combinations

from .kr.syntax import Theory
from .kr.theory import all_axioms
from .logic import (And, Atom, Bottom, Equal, Exists, Fn, Forall, NameSource, Not,
                    Or, Top, Var, apply_substitution, is_ground, resolve,
                    subterms, term_vars, to_nnf, unify, unify_args)
from .temporal import (BUILTIN_PREDICATES, CalendarError, TimePoint,
                       ground_interval_hours, is_point_term, property_holds,
                       relation_holds, to_hours)


class UnlabelledVariable(ValueError):
    pass


class _Evaluator:
    def __init__(self, theory: Theory, extensions: dict, labels: dict):
        self.theory = theory
        self.facts = {}
        for pred, atoms in extensions.items():
            for a in atoms:
                if not all(map(is_ground, a.args)):
                    raise UnlabelledVariable(f"unlabelled variable in {a}")
                self.facts.setdefault(pred, set()).add(a)
        self.names = NameSource("_M")
        self.cache: dict = {}
        self.active: set = set()
        self._domain(labels)

    def _domain(self, labels: dict):
        terms = set()
        for atoms in self.facts.values():
            for a in atoms:
                for x in a.args:
                    terms.update(subterms(x))
        for rules in self.theory.definitions.values():
            for r in rules:
                for x in r.head.args:
                    terms.update(t for t in subterms(x) if is_ground(t))
        points = {t for t in terms if is_point_term(t)}
        points.update(p.to_term() for p in labels.values())
        hours = sorted({to_hours(TimePoint.from_term(p)) for p in points})
        from .temporal import from_hours
        pts = [from_hours(h).to_term() for h in hours]
        self.intervals = [Fn("int", (a, b)) for a, b in combinations(pts, 2)]
        self.general = sorted(terms | set(self.intervals), key=str)

    # -- truth

    def holds(self, f) -> bool:
        return next(self.sat(to_nnf(f), {}), None) is not None

    def ground_atom(self, a: Atom) -> bool:
        if a.pred in BUILTIN_PREDICATES:
            hs = [ground_interval_hours(x) for x in a.args]
            if any(h is None or h[0] >= h[1] for h in hs):
                return False
            if len(hs) == 1:
                return property_holds(a.pred, hs[0])
            return relation_holds(a.pred, hs[0], hs[1])
        if a.pred in self.theory.definitions:
            if a in self.cache:
                return bool(self.cache[a])
            self.cache[a] = False         # recursion guard: least fixpoint
            val = next(self._defined(a, {}), None) is not None
            self.cache[a] = val
            return val
        return a in self.facts.get(a.pred, ())

    def _defined(self, a: Atom, env: dict):
        from .logic import rename_apart
        for rule in self.theory.definitions[a.pred]:
            r = rename_apart(rule, self.names)
            s = unify_args(a.args, r.head.args, env)
            if s is not None:
                yield from self.sat(to_nnf(r.body), s)

    # -- satisfying assignments of NNF formulas

    def sat(self, f, env: dict):
        if isinstance(f, Top):
            yield env
        elif isinstance(f, Bottom):
            return
        elif isinstance(f, And):
            yield from self._conj(list(f.parts), env)
        elif isinstance(f, Or):
            for p in f.parts:
                yield from self.sat(p, env)
        elif isinstance(f, Exists):
            ren = {v: Var(self.names.fresh(v)) for v in f.vars}
            yield from self.sat(apply_substitution(ren, f.body), env)
        else:
            yield from self._conj([f], env)

    def _ready(self, f, env) -> int:
        if isinstance(f, (Top, Bottom)):
            return 0
        if self._ground(f, env):
            return 0
        if isinstance(f, Equal):
            return 1
        if isinstance(f, Atom):
            if f.pred in BUILTIN_PREDICATES:
                return 99
            return 2 if f.pred not in self.theory.definitions else 3
        if isinstance(f, Exists):
            return 4
        if isinstance(f, And):
            return 4
        if isinstance(f, Or):
            return 5
        return 99

    def _ground(self, f, env) -> bool:
        from .logic import free_vars
        return all(is_ground(resolve(Var(v), env)) for v in free_vars(f))

    def _conj(self, parts: list, env: dict):
        if not parts:
            yield env
            return
        scores = [self._ready(p, env) for p in parts]
        i = min(range(len(parts)), key=scores.__getitem__)
        p = parts[i]
        rest = parts[:i] + parts[i + 1:]
        if scores[i] == 99:
            var = self._pick_var(p, env)
            for value in self._candidates(var, p):
                s = unify(Var(var), value, env)
                if s is not None:
                    yield from self._conj(parts, s)
            return
        for s in self._literal(p, env):
            yield from self._conj(rest, s)

    def _literal(self, f, env):
        if isinstance(f, (And, Or, Exists, Top, Bottom)):
            yield from self.sat(f, env)
        elif isinstance(f, Equal):
            s = unify(f.left, f.right, env)
            if s is not None:
                yield s
        elif isinstance(f, Atom):
            args = tuple(resolve(x, env) for x in f.args)
            if all(map(is_ground, args)):
                if self.ground_atom(Atom(f.pred, args)):
                    yield env
            elif f.pred in self.theory.definitions:
                yield from self._defined(Atom(f.pred, args), env)
            else:
                for fact in self.facts.get(f.pred, ()):
                    s = unify_args(args, fact.args, env)
                    if s is not None:
                        yield s
        elif isinstance(f, Not):
            body = apply_substitution(env, f.body)
            if isinstance(body, Equal):
                if body.left != body.right:
                    yield env
            elif not self.ground_atom(body):
                yield env
        elif isinstance(f, Forall):
            ren = {v: Var(self.names.fresh(v)) for v in f.vars}
            body = apply_substitution(ren, f.body)
            if next(self.sat(to_nnf(body, negate=True), env), None) is None:
                yield env
        else:
            raise TypeError(f"unexpected formula {f!r}")

    def _pick_var(self, f, env) -> str:
        from .logic import free_vars
        for v in free_vars(f):
            t = resolve(Var(v), env)
            if not is_ground(t):
                return next(iter(term_vars(t)))
        raise AssertionError("no unbound variable")

    def _candidates(self, var: str, f):
        lit = f.body if isinstance(f, Not) else f
        if isinstance(lit, Atom) and lit.pred in BUILTIN_PREDICATES \
                and any(isinstance(x, Var) and x.name == var for x in lit.args):
            return self.intervals
        return self.general


def violations(theory: Theory, answer, query=None) -> list:
    """Formulas (axioms, open-function axioms, query) false in ``answer``."""
    for pred in answer.extensions:
        if pred not in theory.open_predicates:
            return [Atom(pred, ())]
    ev = _Evaluator(theory, answer.extensions, answer.labels)
    formulas = list(all_axioms(theory))
    if query is not None:
        formulas.insert(0, query)
    return [f for f in formulas if not ev.holds(f)]


def check_model(theory: Theory, answer, query=None) -> bool:
    """True iff every axiom (and ``query``, if given) holds in ``answer``.

    Raises :class:`UnlabelledVariable` if an extension atom is not ground.
    """
    return not violations(theory, answer, query)

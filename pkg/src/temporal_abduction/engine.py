"""Abductive model generation over a classified theory.

The engine makes the query and every axiom true by abducing atoms of open
predicates.  Search is depth-first with chronological backtracking:

* a conjunction pushes its conjuncts, a disjunction tries its disjuncts in
  textual order;
* a defined atom is unfolded through its rules (the positive half of its
  completion);
* a positive open atom first reuses an already abduced atom, one choice
  point per candidate, and only then is abduced afresh;
* negative goals and universally quantified axioms become *denials*
  ``forall U: not (C1 & ... & Cn)``.  A denial selecting an open atom waits
  on that predicate and is re-checked against every atom abduced later,
  which is how "remembered" alternatives of a negated open atom come back
  into play;
* built-in period relations are posted to a :class:`TemporalStore`;
  inconsistency backtracks.

At the end every time variable is labelled.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .kr.syntax import Theory, TheoryError
from .kr.theory import all_axioms
from .logic import (FALSE, TRUE, And, Atom, Bottom, Equal, Exists, Fn, Forall,
                    NameSource, Not, Or, Rule, Top, Var, apply_substitution,
                    conj, free_vars, is_ground, normalize_substitution, resolve,
                    term_vars, to_nnf, unify, unify_args)
from .store import Inconsistent, TemporalStore, builtin_prims, eq, le
from .temporal import (BUILTIN_PREDICATES, CalendarError, TimePoint, from_hours,
                       is_point_term, to_hours)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 6
DEFAULT_ANCHOR = TimePoint(1999, 1, 1, 0)


class EngineError(Exception):
    pass


class BudgetExhausted(EngineError):
    """No (further) model was found within the step budget.

    This says nothing about whether a model exists.
    """

    def __init__(self, budget: int, found: int):
        super().__init__(f"no model found within budget of {budget} reductions"
                         f" ({found} model(s) produced before exhaustion)")
        self.budget = budget
        self.found = found


class FlounderingError(EngineError):
    def __init__(self, what):
        super().__init__(f"floundering on {what}")
        self.what = what


class UnknownPredicate(EngineError):
    pass


@dataclass(frozen=True)
class Answer:
    """One generated model: the abduced extension of every open predicate
    (ground atoms) and the value given to every time variable."""

    extensions: dict
    labels: dict = field(default_factory=dict)

    def key(self) -> frozenset:
        return frozenset(a for atoms in self.extensions.values() for a in atoms)

    def atoms(self, pred: str) -> tuple:
        return self.extensions.get(pred, ())

    def lookup(self, pred: str, *args) -> list:
        """Atoms of ``pred`` whose leading arguments equal ``args``."""
        return [a for a in self.atoms(pred) if a.args[:len(args)] == tuple(args)]


@dataclass(frozen=True)
class Denial:
    """``forall univ: not (conj[0] & conj[1] & ...)``."""

    univ: frozenset
    conj: tuple


@dataclass(frozen=True)
class _Waiting:
    atom: Atom
    denial: Denial          # denial with ``atom`` removed from its conjunction


class _State:
    __slots__ = ("subst", "positive", "waiting", "diseqs", "store", "delayed")

    def __init__(self, subst, positive, waiting, diseqs, store, delayed):
        self.subst = subst
        self.positive = positive
        self.waiting = waiting
        self.diseqs = diseqs
        self.store = store
        self.delayed = delayed

    def copy(self, **kw) -> "_State":
        vals = {k: getattr(self, k) for k in self.__slots__}
        vals.update(kw)
        return _State(**vals)


def _push(goals, *items):
    for g in reversed(items):
        goals = (g, goals)
    return goals


class Engine:
    """One solving session over an immutable theory."""

    def __init__(self, theory: Theory, budget: int = DEFAULT_BUDGET,
                 anchor: TimePoint = DEFAULT_ANCHOR):
        self.theory = theory
        self.budget = budget
        self.anchor = to_hours(anchor)
        self.names = NameSource()
        self.steps = 0
        self._fact_only = {p for p, rules in theory.definitions.items()
                           if all(isinstance(r.body, (Top, Bottom)) for r in rules)}
        self._recursive = _recursive_predicates(theory)

    # -- entry points

    def solve(self, query=None) -> Iterator[Answer]:
        if query is None:
            query = conj(self.theory.queries)
        self._check_known(query)
        goals = None
        items = [to_nnf(query)] + [to_nnf(ax) for ax in all_axioms(self.theory)]
        goals = _push(goals, *items)
        state = _State({}, (), {}, (), TemporalStore(), ())
        found = 0
        for answer in self._search(state, goals):
            found += 1
            yield answer

    def _check_known(self, f):
        from .logic import predicates
        for p in predicates(f):
            if not (p in self.theory.definitions or p in self.theory.open_predicates
                    or p in BUILTIN_PREDICATES):
                raise UnknownPredicate(f"predicate '{p}' does not occur in the theory")

    # -- search loop

    def _tick(self, found: int):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExhausted(self.budget, found)

    def _search(self, state, goals) -> Iterator[Answer]:
        stack = [(state, goals)]
        found = 0
        while stack:
            state, goals = stack.pop()
            while True:
                self._tick(found)
                if goals is None:
                    for answer in self._finish(state):
                        found += 1
                        yield answer
                    break
                goal, goals = goals
                alts = self._reduce(state, goal, goals)
                if not alts:
                    break
                if len(alts) > 1:
                    stack.extend(reversed(alts[1:]))
                state, goals = alts[0]

    # -- reduction of one goal

    def _reduce(self, st: _State, g, goals) -> list:
        if isinstance(g, Denial):
            return self._denial(st, g, goals)
        if isinstance(g, Top):
            return [(st, goals)]
        if isinstance(g, Bottom):
            return []
        if isinstance(g, And):
            return [(st, _push(goals, *g.parts))]
        if isinstance(g, Or):
            first = g.parts[0]
            if (isinstance(first, Not) and isinstance(first.body, Atom)
                    and first.body.pred in self.theory.open_predicates):
                rest = to_nnf(Not(conj(g.parts[1:]) if len(g.parts) == 2 else Or(g.parts[1:])))
                return [(st, _push(goals, Denial(frozenset(), (first.body, rest))))]
            return [(st, (p, goals)) for p in g.parts]
        if isinstance(g, Exists):
            ren = {v: Var(self.names.fresh(v)) for v in g.vars}
            return [(st, (apply_substitution(ren, g.body, self.names), goals))]
        if isinstance(g, Forall):
            ren = {v: Var(self.names.fresh(v)) for v in g.vars}
            body = apply_substitution(ren, g.body, self.names)
            univ = frozenset(r.name for r in ren.values())
            return [(st, (Denial(univ, (to_nnf(body, negate=True),)), goals))]
        if isinstance(g, Equal):
            return self._unify_goal(st, g.left, g.right, goals)
        if isinstance(g, Atom):
            return self._atom(st, g, goals)
        if isinstance(g, Not):
            b = g.body
            if isinstance(b, Equal):
                return self._disequal(st, b.left, b.right, goals)
            if b.pred in BUILTIN_PREDICATES:
                return self._builtin(st, b, goals, negated=True)
            return [(st, (Denial(frozenset(), (b,)), goals))]
        raise EngineError(f"cannot reduce {g!r}")

    def _atom(self, st: _State, a: Atom, goals) -> list:
        if a.pred in BUILTIN_PREDICATES:
            return self._builtin(st, a, goals)
        if a.pred in self.theory.definitions:
            args = tuple(resolve(x, st.subst) for x in a.args)
            alts = []
            for rule in self.theory.definitions[a.pred]:
                r = self._rename(rule)
                s2 = unify_args(args, r.head.args, st.subst)
                if s2 is None:
                    continue
                res = self._commit(st, s2, goals)
                if res is not None:
                    st2, goals2 = res
                    alts.append((st2, (r.body, goals2)))
            return alts
        if a.pred in self.theory.open_predicates:
            return self._open_atom(st, a, goals)
        raise UnknownPredicate(f"predicate '{a.pred}' is neither defined, open nor built in")

    def _rename(self, rule: Rule) -> Rule:
        from .logic import rename_apart
        return rename_apart(rule, self.names)

    def _open_atom(self, st: _State, a: Atom, goals) -> list:
        atom = Atom(a.pred, tuple(resolve(x, st.subst) for x in a.args))
        alts = []
        clash = []
        identical = False
        for prev in st.positive:
            if prev.pred != atom.pred:
                continue
            prev_r = Atom(prev.pred, tuple(resolve(x, st.subst) for x in prev.args))
            if prev_r == atom:
                identical = True
            s2 = unify_args(atom.args, prev_r.args, st.subst)
            if s2 is None:
                continue
            clash.append(prev_r)
            res = self._commit(st, s2, goals)
            if res is not None:
                alts.append(res)
        if identical:
            return alts
        diseqs = st.diseqs + tuple((Fn("", atom.args), Fn("", p.args)) for p in clash)
        st2 = st.copy(positive=st.positive + (atom,), diseqs=diseqs)
        fired = [Denial(w.denial.univ,
                        tuple(Equal(x, y) for x, y in zip(w.atom.args, atom.args)) + w.denial.conj)
                 for w in st.waiting.get(atom.pred, ())]
        alts.append((st2, _push(goals, *fired)))
        return alts

    # -- equality

    def _commit(self, st: _State, s2: dict, goals):
        """Adopt substitution ``s2`` (an extension of ``st.subst``): keep the
        store and disequalities in step and wake delayed goals."""
        new = [k for k in s2 if k not in st.subst]
        if not new:
            return st, goals
        store = st.store
        prims = []
        for k in new:
            if k in store:
                op = self._operand(resolve(Var(k), s2))
                if op is None:
                    return None
                prims.extend(eq(k, op))
        if prims:
            store = store.post(prims)
            if store is None:
                return None
        diseqs = []
        for l, r in st.diseqs:
            m = unify(l, r, s2)
            if m is None:
                continue
            if len(m) == len(s2):
                return None
            diseqs.append((l, r))
        st2 = st.copy(subst=s2, store=store, diseqs=tuple(diseqs), delayed=())
        if st.delayed:
            goals = _push(goals, *st.delayed)
        return st2, goals

    def _unify_goal(self, st, l, r, goals) -> list:
        s2 = unify(l, r, st.subst)
        if s2 is None:
            return []
        res = self._commit(st, s2, goals)
        return [res] if res is not None else []

    def _disequal(self, st, l, r, goals) -> list:
        m = unify(l, r, st.subst)
        if m is None:
            return [(st, goals)]
        if len(m) == len(st.subst):
            return []
        return [(st.copy(diseqs=st.diseqs + ((resolve(l, st.subst), resolve(r, st.subst)),)), goals)]

    # -- built-ins

    def _operand(self, t):
        """Store operand for a point term: variable name or hour count."""
        if isinstance(t, Var):
            return t.name
        if is_point_term(t):
            try:
                return to_hours(TimePoint.from_term(t))
            except CalendarError as exc:
                if is_ground(t):
                    raise EngineError(str(exc)) from None
                raise EngineError(f"time point with variable fields is not supported: {t}") from None
        return None

    def _interval(self, st: _State, t, goals, bind: bool):
        """(state, goals, (start, end)) for an interval term.

        An unbound variable is bound to ``int(S, E)`` with fresh points when
        ``bind`` is set; otherwise ``None`` is returned for it.
        """
        t = resolve(t, st.subst)
        if isinstance(t, Var):
            if not bind:
                return None
            fresh = Fn("int", (Var(self.names.fresh()), Var(self.names.fresh())))
            res = self._commit(st, unify(t, fresh, st.subst), goals)
            if res is None:
                return False
            st, goals = res
            t = fresh
        if not (isinstance(t, Fn) and t.functor == "int" and len(t.args) == 2):
            return False
        s = self._operand(resolve(t.args[0], st.subst))
        e = self._operand(resolve(t.args[1], st.subst))
        if s is None or e is None:
            return False
        return st, goals, (s, e)

    def _builtin(self, st: _State, a: Atom, goals, negated: bool = False) -> list:
        ops = []
        for arg in a.args:
            got = self._interval(st, arg, goals, bind=not negated)
            if got is None:
                # unbound argument of a negated built-in: wait for a binding
                return [(st.copy(delayed=st.delayed + (Not(a),)), goals)]
            if got is False:
                return [(st, goals)] if negated else []
            st, goals, pair = got
            ops.append(pair)
        alts = []
        if not negated:
            base = [le(s, e, -1) for s, e in ops]
            for prims in builtin_prims(a.pred, tuple(ops)):
                store = st.store.post(base + prims)
                if store is not None:
                    alts.append((st.copy(store=store), goals))
            return alts
        for prims in builtin_prims(a.pred, tuple(ops), negated=True):
            store = st.store.post(prims)
            if store is not None:
                alts.append((st.copy(store=store), goals))
        return alts

    # -- denials

    def _denial(self, st: _State, d: Denial, goals) -> list:
        univ = set(d.univ)
        work = [apply_substitution(st.subst, c, self.names) for c in d.conj]
        while True:
            # flatten
            flat = []
            split = None
            for c in work:
                if isinstance(c, Top):
                    continue
                if isinstance(c, Bottom):
                    return [(st, goals)]
                if isinstance(c, And):
                    flat.extend(c.parts)
                elif isinstance(c, Exists):
                    ren = {v: Var(self.names.fresh(v)) for v in c.vars}
                    univ.update(r.name for r in ren.values())
                    flat.append(apply_substitution(ren, c.body, self.names))
                elif isinstance(c, Or) and split is None:
                    split = len(flat)
                    flat.append(c)
                else:
                    flat.append(c)
            if any(isinstance(c, (And, Exists)) for c in flat):
                work = flat
                continue
            work = flat
            if not work:
                return []
            if split is not None:
                orc = work[split]
                rest = work[:split] + work[split + 1:]
                parts = [Denial(frozenset(univ), (p,) + tuple(rest)) for p in orc.parts]
                return [(st, _push(goals, *parts))]
            progressed = self._simplify_equalities(work, univ)
            if progressed is None:
                return [(st, goals)]
            if progressed is not True:
                work = progressed
                continue
            return self._select(st, frozenset(univ), work, goals)

    def _simplify_equalities(self, work: list, univ: set):
        """One deterministic pass over equalities and ground built-ins.

        Returns ``None`` if the denial is satisfied, a new conjunct list if
        something changed, ``True`` if nothing applied.
        """
        for i, c in enumerate(work):
            if isinstance(c, Equal):
                m = unify(c.left, c.right, {}, prefer=univ)
                if m is None:
                    return None
                if not m:
                    return work[:i] + work[i + 1:]
                m = normalize_substitution(m)
                ub = {k: v for k, v in m.items() if k in univ}
                if not ub:
                    continue
                free_eqs = [Equal(Var(k), v) for k, v in m.items() if k not in univ]
                univ.difference_update(ub)
                rest = work[:i] + work[i + 1:]
                return free_eqs + [apply_substitution(ub, r, self.names) for r in rest]
            if isinstance(c, Not) and isinstance(c.body, Equal):
                e = c.body
                if _mentions(e, univ):
                    continue
                m = unify(e.left, e.right, {})
                if m is None:
                    return work[:i] + work[i + 1:]
                if not m:
                    return None
            lit = c.body if isinstance(c, Not) else c
            if isinstance(lit, Atom) and lit.pred in BUILTIN_PREDICATES and all(map(is_ground, lit.args)):
                val = _ground_builtin(lit)
                if isinstance(c, Not):
                    val = not val
                if val:
                    return work[:i] + work[i + 1:]
                return None
        return True

    def _select(self, st: _State, univ: frozenset, work: list, goals) -> list:
        defs = self.theory.definitions
        opens = self.theory.open_predicates

        def unfold(i):
            atom = work[i]
            rest = tuple(work[:i] + work[i + 1:])
            out = []
            for rule in defs[atom.pred]:
                r = self._rename(rule)
                eqs = tuple(Equal(x, y) for x, y in zip(atom.args, r.head.args))
                local = set(free_vars(r.head)) | set(free_vars(r.body))
                out.append(Denial(univ | local, eqs + (r.body,) + rest))
            return [(st, _push(goals, *out))]

        atoms = [(i, c) for i, c in enumerate(work) if isinstance(c, Atom)]
        for i, c in atoms:
            if c.pred in self._fact_only:
                return unfold(i)
        for i, c in atoms:
            if c.pred in opens:
                rest = Denial(univ, tuple(work[:i] + work[i + 1:]))
                w = _Waiting(c, rest)
                waiting = dict(st.waiting)
                waiting[c.pred] = waiting.get(c.pred, ()) + (w,)
                fired = []
                for prev in st.positive:
                    if prev.pred == c.pred:
                        args = tuple(resolve(x, st.subst) for x in prev.args)
                        fired.append(Denial(univ, tuple(Equal(x, y) for x, y in zip(c.args, args))
                                            + rest.conj))
                return [(st.copy(waiting=waiting), _push(goals, *fired))]
        for i, c in atoms:
            if c.pred in defs and c.pred not in self._recursive:
                return unfold(i)
        for i, c in atoms:
            if c.pred in defs:
                return unfold(i)

        # only literals that need a case split (or are stuck) remain
        free = [i for i, c in enumerate(work) if not _mentions(c, univ)]
        if len(work) == 1 and free:
            return [(st, (to_nnf(work[0], negate=True), goals))]
        if free:
            # case split on a universal-free conjunct: it holds and the rest
            # is denied, or it fails
            i = free[0]
            c = work[i]
            rest = Denial(univ, tuple(work[:i] + work[i + 1:]))
            return [(st, _push(goals, c, rest)), (st, (to_nnf(c, negate=True), goals))]
        return [(st.copy(delayed=st.delayed + (Denial(univ, tuple(work)),)), goals)]

    # -- answers

    def _finish(self, st: _State) -> Iterator[Answer]:
        for g in st.delayed:
            if isinstance(g, Denial) and not self._settled(st, g):
                stuck = next((c for c in g.conj if _mentions(c, g.univ)), g.conj[0])
                raise FlounderingError(_fmt(stuck))
        answer = self._label(st)
        if answer is not None:
            yield answer

    def _settled(self, st: _State, d: Denial) -> bool:
        """A delayed denial holds at the end if one of its conjuncts equates a
        still-unbound variable (which becomes a fresh constant) with a
        non-variable term."""
        for c in d.conj:
            if not isinstance(c, Equal):
                continue
            l, r = resolve(c.left, st.subst), resolve(c.right, st.subst)
            for x, y in ((l, r), (r, l)):
                if (isinstance(x, Var) and x.name not in d.univ and x.name not in st.store
                        and not isinstance(y, Var)):
                    return True
        return False

    def _label(self, st: _State) -> Optional[Answer]:
        """The first labelling of the store that also keeps every disequality.

        A disequality violated by the labels is split on its time-point
        bindings (one of them smaller or larger) and labelling is retried.
        """
        pending = [st.store]
        while pending:
            store = pending.pop()
            try:
                values = store.label(self.anchor)
            except Inconsistent:
                continue
            violated = self._violated_diseq(st, store, values)
            if violated is None:
                return self._answer(st, values)
            splits = []
            for x, y in violated:
                for prims in ([le(x, y, -1)], [le(y, x, -1)]):
                    nxt = store.post(prims)
                    if nxt is not None:
                        splits.append(nxt)
            pending.extend(reversed(splits))
        return None

    def _violated_diseq(self, st: _State, store: TemporalStore, values: dict):
        for l, r in st.diseqs:
            m = unify(l, r, st.subst)
            if m is None:
                continue
            pairs = []
            ok = False
            for k in m:
                if k in st.subst:
                    continue
                op = self._operand(resolve(Var(k), m))
                if k not in store or op is None or (isinstance(op, str) and op not in store):
                    # a variable outside the store becomes a fresh constant
                    ok = True
                    break
                b = values[op] if isinstance(op, str) else op
                if values[k] != b:
                    ok = True
                    break
                pairs.append((k, op))
            if not ok:
                return pairs
        return None

    def _answer(self, st: _State, values: dict) -> Answer:
        points = {k: from_hours(v).to_term() for k, v in values.items()}
        skolem = {}

        def ground(t):
            t = resolve(t, st.subst)
            if isinstance(t, Var):
                if t.name in points:
                    return points[t.name]
                if t.name not in skolem:
                    skolem[t.name] = Fn(f"sk{len(skolem) + 1}")
                return skolem[t.name]
            if not t.args:
                return t
            return Fn(t.functor, tuple(ground(a) for a in t.args))

        ext: dict = {}
        for a in st.positive:
            g = Atom(a.pred, tuple(ground(x) for x in a.args))
            ext.setdefault(a.pred, set()).add(g)
        extensions = {p: tuple(sorted(v, key=str)) for p, v in sorted(ext.items())}
        labels = {k: from_hours(v) for k, v in values.items()}
        return Answer(extensions, labels)


def _mentions(f, names) -> bool:
    if not names:
        return False
    return any(n in names for n in free_vars(f))


def _fmt(f) -> str:
    from .kr.printer import format_formula
    try:
        return format_formula(f)
    except TypeError:
        return repr(f)


def _ground_builtin(a: Atom) -> bool:
    from .temporal import ground_interval_hours, property_holds, relation_holds
    hs = [ground_interval_hours(x) for x in a.args]
    if any(h is None for h in hs):
        return False
    if any(not h[0] < h[1] for h in hs):
        return a.pred == "int" and False
    if len(hs) == 1:
        return property_holds(a.pred, hs[0])
    return relation_holds(a.pred, hs[0], hs[1])


def _recursive_predicates(t: Theory) -> set:
    from .logic import predicates
    graph = {p: set(predicates(r.body)) for p, rules in t.definitions.items() for r in rules}
    for p, rules in t.definitions.items():
        deps = set()
        for r in rules:
            deps |= set(predicates(r.body))
        graph[p] = deps & set(t.definitions)
    rec = set()
    for p in graph:
        seen, stack = set(), list(graph[p])
        while stack:
            q = stack.pop()
            if q == p:
                rec.add(p)
                break
            if q not in seen:
                seen.add(q)
                stack.extend(graph.get(q, ()))
    return rec


# ---------------------------------------------------------------------------
# Public operations

def solve(theory: Theory, query=None, budget: int = DEFAULT_BUDGET,
          max_models: Optional[int] = None, anchor: TimePoint = DEFAULT_ANCHOR) -> Iterator[Answer]:
    """Lazily generate models of ``theory`` and ``query``.

    Raw answers may repeat an extension with different labels; see
    :func:`enumerate_models` for the collapsed sequence.
    """
    engine = Engine(theory, budget=budget, anchor=anchor)
    n = 0
    for ans in engine.solve(query):
        yield ans
        n += 1
        if max_models is not None and n >= max_models:
            return


def enumerate_models(theory: Theory, query=None, n: Optional[int] = None,
                     budget: int = DEFAULT_BUDGET,
                     anchor: TimePoint = DEFAULT_ANCHOR) -> list:
    """Up to ``n`` answers with pairwise distinct extensions (all if ``n`` is None)."""
    if n is not None and n < 1:
        raise ValueError("n must be at least 1")
    seen = set()
    out = []
    for ans in solve(theory, query, budget=budget, anchor=anchor):
        k = ans.key()
        if k in seen:
            continue
        seen.add(k)
        out.append(ans)
        if n is not None and len(out) >= n:
            break
    return out

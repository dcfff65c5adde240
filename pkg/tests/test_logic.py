import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from temporal_abduction.kr import parse_formula, parse_term, parse_statements
from temporal_abduction.logic import (And, Atom, Equal, Exists, Fn, Forall, NameSource,
                                      Not, Or, Rule, Var, alpha_equivalent, apply_substitution,
                                      canonical, free_vars, is_ground, is_nnf,
                                      normalize_substitution, rename_apart, resolve, term_vars,
                                      to_nnf, unify)

from oracles import evaluate


def T(text):
    return parse_term(text)


def F(text):
    return parse_formula(text)


# -- unification


def test_unify_binds_variable():
    assert unify(Var("X"), Fn("a"), {}) == {"X": Fn("a")}


def test_distinct_constants_do_not_unify():
    assert unify(Fn("a"), Fn("b"), {}) is None


def test_unify_decomposes_intervals():
    s = unify(T("int(ts(1976,5,21,0),E)"), T("int(S,ts(1976,5,22,0))"), {})
    assert normalize_substitution(s) == {"S": T("ts(1976,5,21,0)"), "E": T("ts(1976,5,22,0)")}


@pytest.mark.parametrize("a, b", [
    ("f(a)", "f(a,a)"),
    ("f(a)", "g(a)"),
    ("X", "f(X)"),
    ("f(X,X)", "f(a,b)"),
    ("f(X,g(X))", "f(Y,Y)"),
])
def test_unification_failures(a, b):
    assert unify(T(a), T(b), {}) is None


def test_unify_extends_given_substitution():
    s = unify(Var("Y"), Var("X"), {"X": Fn("a")})
    assert resolve(Var("Y"), s) == Fn("a")


def test_prefer_chooses_which_variable_is_bound():
    assert unify(Var("X"), Var("U"), {}, prefer={"U"}) == {"U": Var("X")}
    assert unify(Var("U"), Var("X"), {}, prefer={"U"}) == {"U": Var("X")}


_names = st.sampled_from(["X", "Y", "Z"])
_consts = st.sampled_from(["a", "b", "c"])
terms = st.recursive(
    st.one_of(_names.map(Var), _consts.map(Fn)),
    lambda inner: st.tuples(st.sampled_from(["f", "g"]), st.lists(inner, min_size=1, max_size=2))
    .map(lambda p: Fn(p[0] + str(len(p[1])), tuple(p[1]))),
    max_leaves=6,
)


@given(terms, terms)
def test_unify_is_symmetric(a, b):
    assert (unify(a, b, {}) is None) == (unify(b, a, {}) is None)


@given(terms, terms)
def test_unifier_makes_terms_identical(a, b):
    s = unify(a, b, {})
    if s is not None:
        assert resolve(a, s) == resolve(b, s)


@given(terms, terms)
def test_normalized_unifier_is_idempotent(a, b):
    s = unify(a, b, {})
    if s is not None:
        n = normalize_substitution(s)
        for k, v in n.items():
            assert resolve(v, n) == v
            assert k not in term_vars(v)


def _ground_corpus():
    consts = [Fn(c) for c in "abc"]
    out = list(consts)
    for f in ("f1", "g1"):
        out += [Fn(f, (c,)) for c in consts]
    out += [Fn("f2", (x, y)) for x, y in itertools.product(consts, repeat=2)]
    return out


def test_ground_distinct_terms_never_unify():
    corpus = _ground_corpus()
    for a, b in itertools.product(corpus, repeat=2):
        assert (unify(a, b, {}) is not None) == (a == b)


# -- substitution and renaming


def test_apply_substitution_replaces_free_occurrences():
    assert apply_substitution({"X": Fn("a")}, F("p(X,Y)")) == F("p(a,Y)")


def test_apply_empty_substitution_is_identity():
    f = F("forall(X)$ p(X) => q(X)")
    assert apply_substitution({}, f) is f


def test_bound_occurrence_is_shielded():
    f = F("exists(X)$ p(X)")
    assert apply_substitution({"X": Fn("a")}, f) == f


def test_substitution_avoids_capture():
    f = F("exists(Y)$ p(X,Y)")
    g = apply_substitution({"X": Var("Y")}, f)
    assert isinstance(g, Exists)
    (bound,) = g.vars
    assert bound != "Y"
    assert g.body == Atom("p", (Var("Y"), Var(bound)))


def test_rename_apart_uncle_rule():
    (st_,) = parse_statements("uncle(S,C) <- male(S) & sibling(S,P) & parent(P,C).")
    r = st_.rule
    names = NameSource()
    r2 = rename_apart(r, names)
    assert not (set(free_vars(r2.head)) | set(free_vars(r2.body))) & {"S", "C", "P"}
    ren = {v.name: w for v, w in zip(r.head.args, r2.head.args)}
    assert r2.head.pred == "uncle" and len(r2.body.parts) == 3
    assert r2.body.parts[0] == Atom("male", (ren["S"],))


def test_successive_renamings_share_no_names():
    (st_,) = parse_statements("p(X,Y) <- exists(Z)$ q(X,Z) & r(Z,Y).")
    names = NameSource()
    a = rename_apart(st_.rule, names)
    b = rename_apart(st_.rule, names)

    def all_names(r):
        out = set(free_vars(r.head)) | set(free_vars(r.body))
        out.update(r.body.vars)
        return out

    assert not all_names(a) & all_names(b)


def test_renaming_a_ground_rule_returns_it_unchanged():
    (st_,) = parse_statements("clause(s1) <- true.")
    assert rename_apart(st_.rule, NameSource()) == st_.rule


# -- negation normal form


@pytest.mark.parametrize("src, expected", [
    ("not (p & q)", "not p ; not q"),
    ("not not p", "p"),
    ("p => q", "not p ; q"),
    ("not (p ; q & r)", "not p & (not q ; not r)"),
    ("not exists(X)$ p(X)", "forall(X)$ not p(X)"),
    ("p <=> q", "(not p ; q) & (p ; not q)"),
])
def test_to_nnf_examples(src, expected):
    assert to_nnf(F(src)) == F(expected)


def _formulas():
    atoms = st.sampled_from([
        Atom("p", (Var("X"),)), Atom("q", (Var("X"),)), Atom("p", (Var("Y"),)),
        Atom("q", (Fn("a"),)), Equal(Var("X"), Var("Y")), Equal(Var("X"), Fn("b")),
    ])

    def extend(inner):
        return st.one_of(
            inner.map(Not),
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: And(tuple(ps))),
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: Or(tuple(ps))),
            st.tuples(inner, inner).map(lambda p: parse_formula("a => b").__class__(*p)),
            st.tuples(inner, inner).map(lambda p: parse_formula("a <=> b").__class__(*p)),
            st.tuples(st.sampled_from([("X",), ("Y",), ("X", "Y")]), inner)
            .map(lambda p: Exists(*p)),
            st.tuples(st.sampled_from([("X",), ("Y",)]), inner).map(lambda p: Forall(*p)),
        )

    return st.recursive(atoms, extend, max_leaves=6)


def _close(f):
    names = tuple(free_vars(f))
    return Forall(names, f) if names else f


@settings(max_examples=150, deadline=None)
@given(_formulas(), st.integers(0, 2 ** 6 - 1), st.integers(1, 3))
def test_to_nnf_preserves_truth(f, bits, size):
    domain = ("a", "b", "c")[:size]
    cells = [(p, (c,)) for p in ("p", "q") for c in domain]
    interp = {cell for i, cell in enumerate(cells) if bits >> i & 1}
    closed = _close(f)
    g = to_nnf(closed)
    assert is_nnf(g)
    assert evaluate(closed, interp, domain) == evaluate(g, interp, domain)


def test_alpha_equivalence_ignores_bound_names():
    assert alpha_equivalent(F("forall(X)$ p(X) => exists(Y)$ q(X,Y)"),
                            F("forall(A)$ p(A) => exists(B)$ q(A,B)"))
    assert not alpha_equivalent(F("forall(X)$ p(X)"), F("forall(X)$ q(X)"))
    assert canonical(F("exists(Z)$ p(Z)")) == canonical(F("exists(W)$ p(W)"))


def test_is_ground():
    assert is_ground(T("ts(1999,1,1,0)"))
    assert not is_ground(T("int(S,ts(1999,1,1,0))"))

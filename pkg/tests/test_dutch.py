import pytest

from temporal_abduction.dutch import (SentenceAnnotation, bundled_annotation, load_theory,
                                      validate_annotation)
from temporal_abduction.engine import Answer, enumerate_models
from temporal_abduction.kr import completion, parse_formula
from temporal_abduction.logic import Atom, Fn
from temporal_abduction.modelcheck import check_model
from temporal_abduction.temporal import Interval, holds

BUNDLED = ("s1", "s1_na_gisteren", "two_verbs")


@pytest.fixture(scope="module")
def models():
    return {name: enumerate_models(load_theory(name), None) for name in BUNDLED}


def annotation(name, *edits):
    text = bundled_annotation(name)
    for old, new in edits:
        text = text.replace(old, new)
    return SentenceAnnotation.parse(text)


def interval(answer, pred, *args):
    (atom,) = answer.lookup(pred, *args)
    return Interval.from_term(atom.args[-1])


def events(answer):
    return sorted({a.args[0] for a in answer.atoms("loc")}, key=str)


# -- the theory itself


def test_open_predicates_of_the_theory():
    t = load_theory()
    assert t.open_predicates == {"abnormal", "adjunct_verb", "evttime", "loc", "result",
                                 "s_ppp", "time_period", "token_verb"}


def test_vacuous_verbs_are_the_temporal_auxiliaries():
    t = load_theory()
    f = completion("verb_vacuous", t.definitions["verb_vacuous"])
    assert f == parse_formula("forall(Z)$ verb_vacuous(Z) <=> Z = t_hebben ; Z = t_zijn ; Z = t_zullen")


def test_loading_is_repeatable():
    a, b = load_theory("s1"), load_theory("s1")
    assert a.open_predicates == b.open_predicates
    assert set(a.definitions) == set(b.definitions) and a.axioms == b.axioms


# -- annotation validation


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_annotations_are_well_formed(name):
    assert validate_annotation(SentenceAnnotation.load(name)) == []


@pytest.mark.parametrize("edits, code", [
    ((("verbt_word(w2,zijn)", "verbt_word(w2,blah)"),), "unknown-lexeme"),
    ((("s_adjunct(s1,a1) <- true.", "s_adjunct(s1,a1) <- true.\naux_verb(w1,w2) <- true."),),
     "aux-cycle"),
    ((("main_verb(s1,w1) <- true.", ""),), "main-verb"),
    ((("morf(w2,present_tense)", "morf(w2,gerund)"),), "morf"),
    ((("adjt_word(a1,gisteren)", "adjt_word(a1,morgen)"),), "unknown-lexeme"),
    ((("clause(s1) <- true.", "clause(X) <- true."),), "not-ground"),
    ((("clause(s1) <- true.", "clause(s1) <- true.\nfol loc(a, b)."),), "not-a-fact"),
    ((("s_adjunct(s1,a1)", "s_adjunct(s1,a9)"),), "unknown-token"),
])
def test_malformed_annotations_are_diagnosed(edits, code):
    problems = validate_annotation(annotation("s1", *edits))
    assert code in {d.code for d in problems}


def test_operator_adjunct_must_refer_to_known_token():
    a = annotation("s1_na_gisteren", ("na(a1)", "na(a7)"))
    assert [d.code for d in validate_annotation(a)] == ["unknown-token"]


# -- the example sentence and its variants


def test_s1_has_one_model_with_the_expected_extensions(models):
    (m,) = models["s1"]
    assert sorted(map(str, m.atoms("token_verb"))) == ["token_verb(w1,v_zijn)", "token_verb(w2,t_zijn)"]
    assert [str(a) for a in m.atoms("adjunct_verb")] == ["adjunct_verb(a1,w1)"]
    assert m.atoms("result") == () and m.atoms("abnormal") == ()


@pytest.mark.parametrize("name", BUNDLED)
def test_every_model_passes_the_model_checker(models, name):
    t = load_theory(name)
    assert models[name]
    for m in models[name]:
        assert check_model(t, m)


@pytest.mark.parametrize("name", BUNDLED)
def test_eventualities_have_unique_overlapping_times(models, name):
    for m in models[name]:
        for e in events(m):
            loc, evt = interval(m, "loc", e), interval(m, "evttime", e)
            assert holds("overlap", evt, loc)


@pytest.mark.parametrize("name", BUNDLED)
def test_telic_eventualities_lie_within_their_location_time(models, name):
    for m in models[name]:
        for (tok, verb) in (a.args for a in m.atoms("token_verb")):
            if verb == Fn("v_vertrekken"):
                e = Fn("evt", (tok,))
                assert holds("within", interval(m, "evttime", e), interval(m, "loc", e))


def test_present_perfect_locates_event_before_perspective(models):
    (m,) = models["s1"]
    assert holds("before", interval(m, "loc", Fn("evt", (Fn("w1"),))),
                 interval(m, "s_ppp", Fn("s1")))
    assert holds("within", interval(m, "s_ppp", Fn("s1")), interval(m, "evttime", Fn("utt")))


@pytest.mark.parametrize("name", BUNDLED)
def test_adjunct_modifies_exactly_one_substantive_verb(models, name):
    for m in models[name]:
        pairs = [a.args for a in m.atoms("adjunct_verb")]
        assert len({a for a, _ in pairs}) == len(pairs) == 1
        substantive = {w for w, v in (a.args for a in m.atoms("token_verb"))
                       if not str(v).startswith("t_")}
        assert pairs[0][1] in substantive


def test_two_substantive_verbs_give_alternative_attachments(models):
    attachments = {tuple(map(str, m.atoms("adjunct_verb"))) for m in models["two_verbs"]}
    assert attachments >= {("adjunct_verb(a1,w1)",), ("adjunct_verb(a1,w2)",)}


def test_past_tense_vacuous_auxiliary_forces_transposition():
    t = load_theory(annotation("s1", ("morf(w2,present_tense)", "morf(w2,past_tense)")))
    ms = enumerate_models(t, None)
    assert ms
    for m in ms:
        assert [str(a) for a in m.atoms("abnormal")] == ["abnormal(ab_transposed(w2))"]
        assert holds("before", interval(m, "s_ppp", Fn("s1")), interval(m, "evttime", Fn("utt")))
        assert check_model(t, m)


def test_na_gisteren_frame_starts_where_yesterday_ends(models):
    (m,) = models["s1_na_gisteren"]
    frames = {a.args[0]: Interval.from_term(a.args[1].args[1]) for a in m.atoms("time_period")}
    yesterday, after = frames[Fn("a1")], frames[Fn("a2")]
    assert holds("day_a", yesterday) and holds("meets", yesterday, after)
    assert holds("within", interval(m, "loc", Fn("evt", (Fn("w1"),))), after)


def test_mutated_answer_is_rejected(models):
    (m,) = models["s1"]
    t = load_theory("s1")
    bad = tuple(Atom("token_verb", (Fn("w1"), Fn("t_zijn"))) if a.args[0] == Fn("w1") else a
                for a in m.atoms("token_verb"))
    assert not check_model(t, Answer({**m.extensions, "token_verb": bad}, m.labels))


def test_dropping_an_abduced_atom_is_rejected(models):
    (m,) = models["s1"]
    ext = dict(m.extensions)
    del ext["adjunct_verb"]
    assert not check_model(load_theory("s1"), Answer(ext, m.labels))

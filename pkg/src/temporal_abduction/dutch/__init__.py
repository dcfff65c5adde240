"""The bundled theory of Dutch tense, aspect and temporal adjuncts.

``load_theory`` returns the theory (lexicon included) optionally extended
with one sentence annotation.  Annotations are definitional facts over the
tokens of one sentence::

    verbt_word(w1,zijn) <- true.
    main_verb(s1,w1) <- true.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from ..kr.parser import parse_statements
from ..kr.syntax import DefRule, Theory, TheoryError
from ..kr.theory import build_theory
from ..logic import Atom, Fn, Top, Var

THEORY_FILES = ("dutch.kr", "lexicon.kr")

ANNOTATION_PREDICATES = {
    "clause": 1,
    "main_verb": 2,
    "aux_verb": 2,
    "s_adjunct": 2,
    "verbt_word": 2,
    "adjt_word": 2,
    "morf": 2,
}

MORF_VALUES = ("past_participle", "present_tense", "past_tense", "infinitive")


def _read(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


def theory_statements() -> list:
    out = []
    for name in THEORY_FILES:
        out.extend(parse_statements(_read(name), name))
    return out


def load_theory(annotation: Union["SentenceAnnotation", str, Path, None] = None,
                extra: tuple = ()) -> Theory:
    """The bundled theory, plus an annotation and extra theory texts if given.

    ``annotation`` may be a :class:`SentenceAnnotation`, a path, or the name
    of a bundled annotation (``"s1"``).  ``extra`` holds theory source texts.
    """
    statements = theory_statements()
    if annotation is not None:
        if not isinstance(annotation, SentenceAnnotation):
            annotation = SentenceAnnotation.load(annotation)
        statements.extend(annotation.statements)
    for i, text in enumerate(extra):
        statements.extend(parse_statements(text, f"<extra {i + 1}>"))
    return build_theory(statements)


def bundled_annotation(name: str) -> str:
    return _read(f"annotations/{name}.kr")


@dataclass(frozen=True)
class SentenceAnnotation:
    """Input facts for one sentence."""

    statements: tuple
    source: str = "<annotation>"

    @classmethod
    def parse(cls, text: str, source: str = "<annotation>") -> "SentenceAnnotation":
        return cls(tuple(parse_statements(text, source)), source)

    @classmethod
    def load(cls, where: Union[str, Path]) -> "SentenceAnnotation":
        p = Path(where)
        if p.suffix != ".kr" and not p.exists():
            return cls.parse(bundled_annotation(str(where)), f"{where}.kr")
        return cls.parse(p.read_text(encoding="utf-8"), str(p))

    @property
    def facts(self) -> list:
        return [st.rule.head for st in self.statements
                if isinstance(st, DefRule) and isinstance(st.rule.body, Top)]

    def pairs(self, pred: str) -> list:
        return [tuple(a.args) for a in self.facts if a.pred == pred]


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def _lexicon(theory: Theory):
    lexemes = {str(r.head.args[1]) for r in theory.definitions.get("verb_lex", ())}
    words, operators = set(), set()

    def scan(f):
        if isinstance(f, Atom):
            if f.pred == "adjt_word" and len(f.args) == 2 and isinstance(f.args[1], Fn):
                words.add(str(f.args[1]))
            if f.pred == "adjunct" and len(f.args) == 2 and isinstance(f.args[1], Fn) \
                    and f.args[1].args:
                operators.add(f.args[1].functor)
            return
        for attr in ("body", "left", "right"):
            if hasattr(f, attr):
                scan(getattr(f, attr))
        for p in getattr(f, "parts", ()):
            scan(p)

    for ax in theory.axioms:
        scan(ax)
    return lexemes, words, operators


def validate_annotation(a: SentenceAnnotation, theory: Optional[Theory] = None) -> list:
    """Diagnostics for an annotation; an empty list means it is well formed."""
    theory = theory or load_theory()
    lexemes, adj_words, operators = _lexicon(theory)
    out = []

    for st in a.statements:
        if not isinstance(st, DefRule) or not isinstance(st.rule.body, Top):
            out.append(Diagnostic("not-a-fact", f"annotations hold only facts: {st}"))
            continue
        h = st.rule.head
        if ANNOTATION_PREDICATES.get(h.pred) != len(h.args):
            out.append(Diagnostic("unknown-predicate", f"{h.pred}/{len(h.args)} is not an annotation predicate"))
        elif any(isinstance(x, Var) for x in h.args):
            out.append(Diagnostic("not-ground", f"annotation fact with a variable: {h}"))

    clauses = {c for (c,) in a.pairs("clause")}
    mains = {}
    for s, w in a.pairs("main_verb"):
        mains.setdefault(s, []).append(w)
        if s not in clauses:
            out.append(Diagnostic("unknown-clause", f"main_verb({s},{w}) names no clause"))
    for c in sorted(clauses, key=str):
        n = len(mains.get(c, []))
        if n != 1:
            out.append(Diagnostic("main-verb", f"clause {c} has {n} main verbs, expected exactly 1"))

    governs = {}
    for w, c in a.pairs("aux_verb"):
        if w in governs:
            out.append(Diagnostic("aux-chain", f"auxiliary {w} has more than one complement"))
        governs[w] = c
    main_tokens = {w for ws in mains.values() for w in ws}
    for w in sorted(governs, key=str):
        seen = [w]
        cur = governs[w]
        while cur in governs and cur not in seen:
            seen.append(cur)
            cur = governs[cur]
        if cur in seen:
            out.append(Diagnostic("aux-cycle", "auxiliary chain is cyclic: "
                                  + " -> ".join(str(x) for x in seen + [cur])))
        elif cur not in main_tokens:
            out.append(Diagnostic("aux-root", f"auxiliary chain from {w} does not end in a main verb"))

    verb_words = {}
    for t, word in a.pairs("verbt_word"):
        verb_words.setdefault(t, []).append(word)
    adj = {}
    for t, word in a.pairs("adjt_word"):
        adj.setdefault(t, []).append(word)
    for table in (verb_words, adj):
        for t, ws in sorted(table.items(), key=lambda kv: str(kv[0])):
            if len(ws) != 1:
                out.append(Diagnostic("word", f"token {t} has {len(ws)} words, expected exactly 1"))
    for t in sorted(set(verb_words) & set(adj), key=str):
        out.append(Diagnostic("word", f"token {t} is both a verb and an adjunct token"))

    verb_tokens = set(verb_words) | main_tokens | set(governs) | set(governs.values())
    morfs = {}
    for t, m in a.pairs("morf"):
        morfs.setdefault(t, []).append(m)
        if str(m) not in MORF_VALUES:
            out.append(Diagnostic("morf", f"unknown verb form {m} for {t}"))
    for t in sorted(verb_tokens, key=str):
        if t not in verb_words:
            out.append(Diagnostic("word", f"verb token {t} has no word"))
        n = len(morfs.get(t, []))
        if n != 1:
            out.append(Diagnostic("morf", f"verb token {t} has {n} verb forms, expected exactly 1"))

    for t, ws in sorted(verb_words.items(), key=lambda kv: str(kv[0])):
        for word in ws:
            if str(word) not in lexemes:
                out.append(Diagnostic("unknown-lexeme", f"no verb meaning for word {word} of {t}"))
    for t, ws in sorted(adj.items(), key=lambda kv: str(kv[0])):
        for word in ws:
            if isinstance(word, Fn) and word.args:
                if word.functor not in operators:
                    out.append(Diagnostic("unknown-lexeme", f"no adjunct meaning for {word.functor} in {t}"))
                elif not all(x in adj for x in word.args):
                    out.append(Diagnostic("unknown-token", f"{word} of {t} refers to an unknown adjunct token"))
            elif str(word) not in adj_words:
                out.append(Diagnostic("unknown-lexeme", f"no adjunct meaning for word {word} of {t}"))
    for s, t in a.pairs("s_adjunct"):
        if s not in clauses:
            out.append(Diagnostic("unknown-clause", f"s_adjunct({s},{t}) names no clause"))
        if t not in adj:
            out.append(Diagnostic("unknown-token", f"s_adjunct({s},{t}) names no adjunct token"))
    return out


__all__ = ["Diagnostic", "SentenceAnnotation", "THEORY_FILES", "TheoryError",
           "bundled_annotation", "load_theory", "theory_statements", "validate_annotation"]

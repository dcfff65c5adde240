"""Command line front end: theory + annotation (+ query) -> models or ``no``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .dutch import SentenceAnnotation, load_theory, validate_annotation
from .engine import DEFAULT_ANCHOR, DEFAULT_BUDGET, EngineError, enumerate_models
from .kr import parse_formula
from .kr.syntax import TheoryError
from .temporal import CalendarError, TimePoint, parse_timepoint

EXIT_MODELS, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    annotation_path: str
    extra_theory_paths: tuple = ()
    query_text: Optional[str] = None
    max_models: int = 1
    anchor: TimePoint = DEFAULT_ANCHOR
    output_format: str = "text"
    step_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.max_models < 1:
            raise ValueError("max_models must be at least 1")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def render_text(answers) -> str:
    if not answers:
        return "no\n"
    blocks = []
    for a in answers:
        lines = []
        for pred in sorted(a.extensions):
            atoms = sorted(str(x) for x in a.extensions[pred])
            if atoms:
                lines.append(f"{pred} : [{', '.join(atoms)}]")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def render_json(answers) -> str:
    doc = [{"extensions": {p: sorted(str(x) for x in a.extensions[p]) for p in sorted(a.extensions)},
            "labels": {k: str(v) for k, v in sorted(a.labels.items())}}
           for a in answers]
    return json.dumps(doc, indent=2) + "\n"


def _load_annotation(path: str) -> SentenceAnnotation:
    p = Path(path)
    if p.is_file():
        return SentenceAnnotation.load(p)
    if p.suffix or p.parent != Path("."):
        raise FileNotFoundError(f"{path}: no such annotation file")
    try:
        return SentenceAnnotation.load(path)     # bundled annotation by name
    except FileNotFoundError:
        raise FileNotFoundError(f"{path}: no such annotation file") from None


def run(config: RunConfig) -> tuple:
    """Run one configuration; returns ``(exit status, stdout text, stderr text)``."""
    try:
        annotation = _load_annotation(config.annotation_path)
        extra = tuple(Path(p).read_text(encoding="utf-8") for p in config.extra_theory_paths)
        theory = load_theory(annotation, extra=extra)
        problems = validate_annotation(annotation, theory)
        if problems:
            msg = "".join(f"{annotation.source}: {d}\n" for d in problems)
            return EXIT_ERROR, "", msg
        query = parse_formula(config.query_text) if config.query_text else None
        answers = enumerate_models(theory, query, n=config.max_models,
                                   budget=config.step_budget, anchor=config.anchor)
    except (OSError, TheoryError, EngineError, CalendarError) as exc:
        return EXIT_ERROR, "", f"error: {exc}\n"
    out = render_json(answers) if config.output_format == "json" else render_text(answers)
    return (EXIT_MODELS if answers else EXIT_NO), out, ""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="temporal-abduction",
        description="Generate models of the Dutch tense theory for an annotated sentence.")
    p.add_argument("--annotation", required=True,
                   help="annotation file (or the name of a bundled annotation, e.g. s1)")
    p.add_argument("--theory", action="append", default=[], metavar="PATH",
                   help="additional theory file (repeatable)")
    p.add_argument("--query", help="observation formula, e.g. 'utt(U) & hour(U)'")
    p.add_argument("--models", type=int, default=1, help="maximum number of models (default 1)")
    p.add_argument("--anchor", default=None, help="labelling anchor, e.g. ts(1999,1,1,0)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help=f"reduction step budget (default {DEFAULT_BUDGET})")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        anchor = parse_timepoint(args.anchor) if args.anchor else DEFAULT_ANCHOR
        config = RunConfig(args.annotation, tuple(args.theory), args.query, args.models,
                           anchor, args.format, args.budget)
    except (ValueError, TheoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    status, out, err = run(config)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())

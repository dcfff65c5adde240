"""Abductive extraction of temporal information from annotated Dutch sentences."""

from .engine import (Answer, BudgetExhausted, EngineError, FlounderingError,
                     enumerate_models, solve)
from .kr import parse_formula, parse_theory
from .modelcheck import check_model
from .temporal import Interval, TimePoint, from_hours, holds, to_hours

__all__ = [
    "Answer", "BudgetExhausted", "EngineError", "FlounderingError", "Interval",
    "TimePoint", "check_model", "enumerate_models", "from_hours", "holds",
    "parse_formula", "parse_theory", "solve", "to_hours",
]

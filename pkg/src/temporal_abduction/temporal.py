"""Calendar time points and half-open intervals at one-hour resolution.

Points are ``ts(Year, Month, Day, Hour)`` terms on the proleptic Gregorian
calendar.  They are linearized to an absolute hour count so that every
interval relation becomes a comparison between endpoint hours.  Intervals
``int(P1, P2)`` denote ``[P1, P2)`` and are never empty.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass

from .logic import Fn, Var

HOURS_PER_DAY = 24

#: predicate name -> arity for the built-in period vocabulary
BUILTIN_PREDICATES = {
    "int": 1,
    "point": 1,
    "hour": 1,
    "day_a": 1,
    "overlap": 2,
    "within": 2,
    "before": 2,
    "meets": 2,
}

RELATIONS = ("overlap", "within", "before", "meets")


class CalendarError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TimePoint:
    year: int
    month: int
    day: int
    hour: int = 0

    def __post_init__(self):
        if not 0 <= self.hour <= 23:
            raise CalendarError(f"hour out of range: {self.hour}")
        try:
            datetime.date(self.year, self.month, self.day)
        except (ValueError, OverflowError) as exc:
            raise CalendarError(f"invalid date {self.year}-{self.month}-{self.day}: {exc}") from None

    def __str__(self) -> str:
        return f"ts({self.year},{self.month},{self.day},{self.hour})"

    def to_term(self) -> Fn:
        return Fn("ts", tuple(Fn(str(v)) for v in (self.year, self.month, self.day, self.hour)))

    @classmethod
    def from_term(cls, t) -> "TimePoint":
        if not (isinstance(t, Fn) and t.functor == "ts" and len(t.args) == 4):
            raise CalendarError(f"not a time point: {t}")
        try:
            vals = [int(a.functor) for a in t.args if isinstance(a, Fn) and not a.args]
        except ValueError:
            raise CalendarError(f"non-integer field in {t}") from None
        if len(vals) != 4:
            raise CalendarError(f"non-integer field in {t}")
        return cls(*vals)


def to_hours(p: TimePoint) -> int:
    """Absolute hour count: midnight of proleptic day ordinal ``n`` is ``24 * n``.

    Midnights are exactly the multiples of 24, which is what day alignment
    relies on.
    """
    return datetime.date(p.year, p.month, p.day).toordinal() * HOURS_PER_DAY + p.hour


def from_hours(h: int) -> TimePoint:
    days, hour = divmod(h, HOURS_PER_DAY)
    try:
        d = datetime.date.fromordinal(days)
    except (ValueError, OverflowError):
        raise CalendarError(f"hour count {h} outside the supported calendar range") from None
    return TimePoint(d.year, d.month, d.day, hour)


def is_point_term(t) -> bool:
    return isinstance(t, Fn) and t.functor == "ts" and len(t.args) == 4


@dataclass(frozen=True)
class Interval:
    start: TimePoint
    end: TimePoint

    def __post_init__(self):
        if not to_hours(self.start) < to_hours(self.end):
            raise CalendarError(f"empty interval [{self.start}, {self.end})")

    def __str__(self) -> str:
        return f"int({self.start},{self.end})"

    @property
    def hours(self) -> tuple:
        return to_hours(self.start), to_hours(self.end)

    def to_term(self) -> Fn:
        return Fn("int", (self.start.to_term(), self.end.to_term()))

    @classmethod
    def from_term(cls, t) -> "Interval":
        if not (isinstance(t, Fn) and t.functor == "int" and len(t.args) == 2):
            raise CalendarError(f"not an interval: {t}")
        return cls(TimePoint.from_term(t.args[0]), TimePoint.from_term(t.args[1]))

    @classmethod
    def day(cls, year: int, month: int, day: int) -> "Interval":
        start = TimePoint(year, month, day, 0)
        return cls(start, from_hours(to_hours(start) + HOURS_PER_DAY))


def relation_holds(rel: str, a: tuple, b: tuple) -> bool:
    """Truth of ``rel`` on hour pairs ``a = (sA, eA)`` and ``b = (sB, eB)``."""
    (sa, ea), (sb, eb) = a, b
    if rel == "overlap":
        return sa < eb and sb < ea
    if rel == "within":
        return sb <= sa and ea <= eb
    if rel == "before":
        return ea <= sb
    if rel == "meets":
        return ea == sb
    raise ValueError(f"unknown relation {rel!r}")


def property_holds(prop: str, a: tuple) -> bool:
    s, e = a
    if prop == "int":
        return s < e
    if prop in ("hour", "point"):
        return e - s == 1
    if prop == "day_a":
        return e - s == HOURS_PER_DAY and s % HOURS_PER_DAY == 0
    raise ValueError(f"unknown property {prop!r}")


def holds(rel: str, a: Interval, b: Interval = None) -> bool:
    """Ground check of a built-in relation (binary) or property (unary)."""
    if b is None:
        return property_holds(rel, a.hours)
    return relation_holds(rel, a.hours, b.hours)


def parse_timepoint(text: str) -> TimePoint:
    """Read ``ts(Y,M,D,H)`` (or ``Y-M-D[-H]``) into a :class:`TimePoint`."""
    from .kr.parser import parse_term
    text = text.strip()
    if text.startswith("ts("):
        return TimePoint.from_term(parse_term(text))
    parts = [int(p) for p in text.replace("T", "-").split("-")]
    return TimePoint(*parts)


def ground_interval_hours(t):
    """Hour pair of a ground ``int/2`` term, or ``None`` if ``t`` is not one."""
    if isinstance(t, Var) or not (isinstance(t, Fn) and t.functor == "int" and len(t.args) == 2):
        return None
    try:
        return to_hours(TimePoint.from_term(t.args[0])), to_hours(TimePoint.from_term(t.args[1]))
    except CalendarError:
        return None

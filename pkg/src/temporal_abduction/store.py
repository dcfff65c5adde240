"""Difference-bound constraint store over absolute hours.

Constraints are ``x - y <= c`` between hour-valued variables and constants,
plus *alignment* (a variable is a midnight, i.e. a multiple of 24).  The
store keeps the all-pairs shortest-path closure, so consistency is decided
exactly after every post; alignment is folded in by rounding the bound
between any two aligned nodes down to a multiple of 24 and re-closing.

Operands are variable names (``str``) or hour constants (``int``).
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .temporal import HOURS_PER_DAY, RELATIONS

INF = float("inf")
ZERO = "<zero>"


def le(x, y, c: int) -> tuple:
    """Primitive ``x - y <= c``."""
    return ("le", x, y, c)


def eq(x, y, c: int = 0) -> list:
    """``x - y == c`` as two primitives (``y`` is registered first)."""
    return [le(y, x, -c), le(x, y, c)]


def align(x) -> tuple:
    return ("align", x)


class Inconsistent(Exception):
    pass


class TemporalStore:
    """Immutable store; every post returns a new store or ``None``."""

    __slots__ = ("nodes", "index", "dist", "aligned")

    def __init__(self, nodes=(ZERO,), dist=None, aligned=frozenset({ZERO})):
        self.nodes = tuple(nodes)
        self.index = {n: i for i, n in enumerate(self.nodes)}
        self.dist = dist if dist is not None else [[0]]
        self.aligned = aligned

    def __contains__(self, name) -> bool:
        return name in self.index

    @property
    def variables(self) -> tuple:
        return self.nodes[1:]

    def __len__(self) -> int:
        return len(self.nodes) - 1

    # -- building

    def _copy(self) -> "TemporalStore":
        return TemporalStore(self.nodes, [row[:] for row in self.dist], self.aligned)

    def _add_node(self, name: str):
        for row in self.dist:
            row.append(INF)
        self.dist.append([INF] * (len(self.nodes) + 1))
        self.dist[-1][-1] = 0
        self.nodes = self.nodes + (name,)
        self.index[name] = len(self.nodes) - 1

    def with_variables(self, names: Iterable[str]) -> "TemporalStore":
        new = [n for n in names if n not in self.index]
        if not new:
            return self
        out = self._copy()
        for n in new:
            out._add_node(n)
        return out

    def _node(self, operand) -> tuple:
        """(node index, offset) for an operand."""
        if isinstance(operand, int):
            return 0, operand
        if operand not in self.index:
            self._add_node(operand)
        return self.index[operand], 0

    def post(self, prims: Sequence[tuple]) -> Optional["TemporalStore"]:
        """Store extended with the conjunction ``prims``, or ``None`` if inconsistent."""
        out = self._copy()
        try:
            for p in prims:
                out._post_one(p)
        except Inconsistent:
            return None
        return out

    def _post_one(self, p):
        if p[0] == "align":
            op = p[1]
            if isinstance(op, int):
                if op % HOURS_PER_DAY:
                    raise Inconsistent
                return
            i, _ = self._node(op)
            if op not in self.aligned:
                self.aligned = self.aligned | {op}
                self._tighten()
            return
        _, x, y, c = p
        xi, xo = self._node(x)
        yi, yo = self._node(y)
        # (x + xo) - (y + yo) <= c  -->  node_x - node_y <= c - xo + yo
        self._add_edge(yi, xi, c - xo + yo)
        self._tighten()

    def _add_edge(self, u: int, v: int, w):
        """Record ``node_v - node_u <= w`` and restore closure."""
        d = self.dist
        if d[u][v] <= w:
            return
        if d[v][u] + w < 0:
            raise Inconsistent
        n = len(d)
        du = [d[i][u] for i in range(n)]
        dv = d[v]
        for i in range(n):
            diu = du[i]
            if diu == INF:
                continue
            base = diu + w
            row = d[i]
            for j in range(n):
                cand = base + dv[j]
                if cand < row[j]:
                    row[j] = cand
        for i in range(n):
            if d[i][i] < 0:
                raise Inconsistent

    def _tighten(self):
        if len(self.aligned) < 2:
            return
        idx = [self.index[a] for a in self.aligned if a in self.index]
        changed = True
        while changed:
            changed = False
            for a in idx:
                for b in idx:
                    w = self.dist[a][b]
                    if a == b or w == INF:
                        continue
                    r = (w // HOURS_PER_DAY) * HOURS_PER_DAY
                    if r < w:
                        self._add_edge(a, b, r)
                        changed = True

    # -- queries

    def bounds(self, name: str) -> tuple:
        """(lowest, highest) feasible value of a variable, possibly infinite."""
        i = self.index[name]
        return -self.dist[i][0], self.dist[0][i]

    def difference_bound(self, x: str, y: str):
        """Tightest upper bound on ``x - y``."""
        return self.dist[self.index[y]][self.index[x]]

    def entails(self, prim) -> bool:
        if prim[0] == "align":
            lo, hi = self.bounds(prim[1])
            return lo == hi and lo % HOURS_PER_DAY == 0
        _, x, y, c = prim
        xi, xo = (0, x) if isinstance(x, int) else (self.index.get(x), 0)
        yi, yo = (0, y) if isinstance(y, int) else (self.index.get(y), 0)
        if xi is None or yi is None:
            return False
        return self.dist[yi][xi] <= c - xo + yo

    def label(self, anchor: int, order: Optional[Sequence[str]] = None) -> dict:
        """Assign every variable, in creation order, the feasible value closest
        to ``anchor`` (preferring values at or after it).

        Raises :class:`Inconsistent` if the store has no solution.
        """
        store = self._copy()
        values = {}
        for name in (order if order is not None else self.variables):
            lo, hi = store.bounds(name)
            v = anchor
            if v < lo:
                v = lo
            if v > hi:
                v = hi
            if name in store.aligned and v % HOURS_PER_DAY:
                up = v + (-v) % HOURS_PER_DAY
                v = up if up <= hi else v - v % HOURS_PER_DAY
            if v == INF or v == -INF:
                raise Inconsistent
            v = int(v)
            try:
                store._post_one(le(name, 0, v))
                store._post_one(le(0, name, -v))
            except Inconsistent:
                raise
            values[name] = v
        return values


# ---------------------------------------------------------------------------
# Interval vocabulary as primitive conjunctions

def relation_prims(rel: str, a: tuple, b: tuple) -> list:
    """Primitives for ``rel(A, B)``; ``a``/``b`` are (start, end) operand pairs."""
    (sa, ea), (sb, eb) = a, b
    if rel == "overlap":
        return [le(sa, eb, -1), le(sb, ea, -1)]
    if rel == "within":
        return [le(sb, sa, 0), le(ea, eb, 0)]
    if rel == "before":
        return [le(ea, sb, 0)]
    if rel == "meets":
        return eq(ea, sb)
    raise ValueError(f"unknown relation {rel!r}")


def negated_relation_prims(rel: str, a: tuple, b: tuple) -> list:
    """Alternatives (a list of conjunctions) for ``not rel(A, B)``."""
    (sa, ea), (sb, eb) = a, b
    if rel == "overlap":
        return [[le(ea, sb, 0)], [le(eb, sa, 0)]]
    if rel == "within":
        return [[le(sa, sb, -1)], [le(eb, ea, -1)]]
    if rel == "before":
        return [[le(sb, ea, -1)]]
    if rel == "meets":
        return [[le(ea, sb, -1)], [le(sb, ea, -1)]]
    raise ValueError(f"unknown relation {rel!r}")


def property_prims(prop: str, a: tuple) -> list:
    s, e = a
    if prop == "int":
        return [le(s, e, -1)]
    if prop in ("hour", "point"):
        return eq(e, s, 1)
    if prop == "day_a":
        return eq(e, s, HOURS_PER_DAY) + [align(s)]
    raise ValueError(f"unknown property {prop!r}")


def negated_property_prims(prop: str, a: tuple) -> list:
    s, e = a
    if prop == "int":
        return [[le(e, s, 0)]]
    if prop in ("hour", "point"):
        return [[le(e, s, 0)], [le(s, e, -2)]]
    if prop == "day_a":
        # a misaligned 24-hour period is not representable as a bound; only
        # the wrong-length alternatives are offered
        return [[le(e, s, HOURS_PER_DAY - 1)], [le(s, e, -HOURS_PER_DAY - 1)]]
    raise ValueError(f"unknown property {prop!r}")


def builtin_prims(name: str, args: tuple, negated: bool = False) -> list:
    """Alternatives (list of conjunctions) for a built-in literal over operand pairs."""
    if name in RELATIONS:
        if negated:
            return negated_relation_prims(name, args[0], args[1])
        return [relation_prims(name, args[0], args[1])]
    if negated:
        return negated_property_prims(name, args[0])
    return [property_prims(name, args[0])]


def consistent(prims: Sequence[tuple]) -> bool:
    return TemporalStore().post(prims) is not None

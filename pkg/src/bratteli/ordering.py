"""Orders on incoming edges, words, level languages and the Vershik successor.

An order lists, for every vertex ``v`` at level ``n >= 1``, the edges of
``r^{-1}(v)`` from minimal to maximal.  Paths are compared by their last
(highest-level) differing edge, so the word ``w(v, m, n)`` is obtained from
``w(v, n-1, n)`` by substituting each letter ``u`` with ``w(u, m, n-1)``.
"""

from __future__ import annotations

from typing import NamedTuple

from .diagram import DiagramError, EdgeId, all_paths, telescope

__all__ = [
    "OrderError",
    "DiagramOrder",
    "Word",
    "LevelLanguage",
    "assign_order",
    "order_from_words",
    "default_order",
    "word",
    "words_at",
    "extremal_path",
    "level_language",
    "telescope_order",
    "vershik_successor",
    "path_key",
    "sorted_paths",
]


class OrderError(ValueError):
    """Raised when an order specification is not a permutation of r^{-1}(v)."""


class Word(NamedTuple):
    level: int
    letters: tuple

    def __len__(self):
        return len(self.letters)

    def render(self, diagram=None):
        if diagram is None:
            return " ".join(map(str, self.letters))
        return "".join(diagram.name(self.level, x) for x in self.letters)


class DiagramOrder:
    """Per-vertex linear orders of incoming edges.

    ``levels[n - 1][v]`` is the tuple of edges into ``v`` at level ``n``,
    minimal first.  A stationary order reuses its last level forever.
    """

    def __init__(self, diagram, levels, stationary=False):
        self.diagram = diagram
        self.stationary = bool(stationary)
        if self.stationary and not diagram.stationary:
            raise OrderError("a stationary order needs a stationary diagram")
        levels = [tuple(tuple(EdgeId(*e) for e in lst) for lst in lvl) for lvl in levels]
        if not levels:
            raise OrderError("order has no levels")
        if not self.stationary and len(levels) != diagram.depth:
            raise OrderError(f"order covers {len(levels)} levels, diagram has {diagram.depth}")
        for n, lvl in enumerate(levels, start=1):
            if len(lvl) != diagram.size(n):
                raise OrderError(f"level {n}: expected {diagram.size(n)} vertices, got {len(lvl)}")
            for v, lst in enumerate(lvl):
                expected = set(diagram.in_edges(n, v))
                if len(set(lst)) != len(lst):
                    raise OrderError(f"level {n} vertex {v}: an edge is listed twice")
                if set(lst) != expected:
                    missing = sorted(expected - set(lst))
                    extra = sorted(set(lst) - expected)
                    raise OrderError(
                        f"level {n} vertex {v}: not a permutation of r^-1(v)"
                        f" (missing {missing}, unexpected {extra})"
                    )
        if self.stationary:
            block = diagram.matrix(diagram.depth - 1)
            if diagram.matrix(len(levels) - 1) != block:
                raise OrderError("the last level of a stationary order must sit on the repeating block")
        self._levels = levels
        self._pos = {}

    @property
    def depth(self):
        return self.diagram.depth

    def at(self, n, v):
        """Edges into ``v`` at level ``n``, minimal first."""
        if n <= len(self._levels):
            return self._levels[n - 1][v]
        if not self.stationary:
            raise OrderError(f"level {n} beyond order depth {len(self._levels)}")
        return tuple(EdgeId(n, e.range, e.source, e.copy) for e in self._levels[-1][v])

    def letters(self, n, v):
        """``w(v, n-1, n)`` as a tuple of sources."""
        return tuple(e.source for e in self.at(n, v))

    def position(self, e):
        key = (e.level, e.range)
        table = self._pos.get(key)
        if table is None:
            table = {x: i for i, x in enumerate(self.at(e.level, e.range))}
            self._pos[key] = table
        return table[e]

    def max_edge(self, n, v):
        return self.at(n, v)[-1]

    def min_edge(self, n, v):
        return self.at(n, v)[0]

    def successor(self, e):
        """The next edge in ``r^{-1}(r(e))`` or ``None`` if ``e`` is maximal."""
        lst = self.at(e.level, e.range)
        i = self.position(e)
        return lst[i + 1] if i + 1 < len(lst) else None

    def extend(self, depth):
        diagram = self.diagram.extend(depth)
        if diagram is self.diagram:
            return self
        return DiagramOrder(diagram, self._levels, stationary=self.stationary)

    def truncate(self, depth):
        diagram = self.diagram.truncate(depth)
        return DiagramOrder(diagram, [[self.at(n, v) for v in diagram.vertices(n)]
                                      for n in range(1, depth + 1)])

    def level_specs(self):
        return self._levels

    def __eq__(self, other):
        if not isinstance(other, DiagramOrder):
            return NotImplemented
        return (self.diagram == other.diagram and self._levels == other._levels
                and self.stationary == other.stationary)

    def __hash__(self):
        return hash((tuple(self._levels), self.stationary))

    def to_json(self):
        return {
            "version": 1,
            "stationary": self.stationary,
            "levels": [[[[e.source, e.copy] for e in lst] for lst in lvl] for lvl in self._levels],
        }


def assign_order(diagram, spec, stationary=None):
    """Validate an order spec.

    ``spec`` is either the JSON dict produced by :meth:`DiagramOrder.to_json`
    or a list per level of lists per vertex of ``[source, copy]`` refs.
    """
    if isinstance(spec, dict):
        if stationary is None:
            stationary = spec.get("stationary", False)
        spec = spec["levels"]
    stationary = bool(stationary)
    levels = []
    for n, lvl in enumerate(spec, start=1):
        levels.append([
            [EdgeId(n, v, int(ref[0]), int(ref[1])) for ref in lst]
            for v, lst in enumerate(lvl)
        ])
    if stationary:
        diagram = diagram.extend(len(levels))
    return DiagramOrder(diagram, levels, stationary=stationary)


def order_from_words(diagram, words, stationary=False):
    """Order from source sequences; parallel copies numbered by occurrence.

    ``words[n - 1][v]`` is ``w(v, n-1, n)``.  A level given as ``None``
    uses the enumeration order.
    """
    levels = []
    for n, lvl in enumerate(words, start=1):
        if lvl is None:
            levels.append([diagram.in_edges(n, v) for v in diagram.vertices(n)])
            continue
        per_vertex = []
        for v, letters in enumerate(lvl):
            seen = {}
            lst = []
            for s in letters:
                c = seen.get(s, 0)
                seen[s] = c + 1
                lst.append(EdgeId(n, v, int(s), c))
            per_vertex.append(lst)
        levels.append(per_vertex)
    if stationary:
        diagram = diagram.extend(len(levels))
    return DiagramOrder(diagram, levels, stationary=stationary)


def default_order(diagram):
    """Enumeration order (source-major, copy-minor) at every level."""
    levels = [[diagram.in_edges(n, v) for v in diagram.vertices(n)]
              for n in range(1, diagram.depth + 1)]
    return DiagramOrder(diagram, levels, stationary=diagram.stationary)


def word(order, v, n, m):
    """``w(v, m, n)``: level-``m`` sources of paths into ``v`` in order."""
    if not 0 <= m < n:
        raise OrderError(f"word needs 0 <= m < n, got m={m}, n={n}")
    if n > order.depth and not order.stationary:
        raise OrderError(f"level {n} beyond depth {order.depth}")
    cur = [v]
    for level in range(n, m, -1):
        nxt = []
        for x in cur:
            nxt.extend(order.letters(level, x))
        cur = nxt
    return Word(m, tuple(cur))


def words_at(order, n, m):
    """``w(v, m, n)`` for every ``v`` at level ``n``."""
    return [word(order, v, n, m) for v in order.diagram.vertices(n)]


def extremal_path(order, kind, n, u, m):
    """Maximal (``kind='max'``) or minimal path from level ``n`` to ``u`` at ``m``.

    Returned lowest level first.
    """
    if kind not in ("max", "min"):
        raise ValueError("kind must be 'max' or 'min'")
    if not 0 <= n < m:
        raise OrderError(f"extremal path needs 0 <= n < m, got n={n}, m={m}")
    pick = order.max_edge if kind == "max" else order.min_edge
    edges = []
    x = u
    for level in range(m, n, -1):
        e = pick(level, x)
        edges.append(e)
        x = e.source
    return tuple(reversed(edges))


def path_key(order, path):
    """Sort key realising the lexicographic order (last differing edge)."""
    return tuple(order.position(e) for e in reversed(path))


def sorted_paths(order, m, n, v):
    """All paths from level ``m`` into ``v`` at level ``n`` in order (brute force)."""
    return sorted(all_paths(order.diagram, m, n, v), key=lambda p: path_key(order, p))


def vershik_successor(order, path):
    """Successor of a finite path from the root, or ``None`` when all edges are maximal."""
    path = tuple(path)
    if not path or path[0].level != 1:
        raise OrderError("path must start at the root")
    for a, b in zip(path, path[1:]):
        if a.range != b.source or b.level != a.level + 1:
            raise OrderError(f"edges {a} and {b} do not chain")
    for k, e in enumerate(path):
        nxt = order.successor(e)
        if nxt is not None:
            below = extremal_path(order, "min", 0, nxt.source, k) if k else ()
            return below + (nxt,) + path[k + 1:]
    return None


class LevelLanguage:
    """Factors of the words ``w(v, n, N')`` for ``n < N' <= horizon``.

    Two-letter factors are computed from first/last letters without
    expanding words; longer factors expand the words on demand.
    """

    def __init__(self, order, n, horizon):
        if not 0 <= n < horizon:
            raise OrderError(f"language needs n < horizon, got n={n}, horizon={horizon}")
        if horizon > order.depth and not order.stationary:
            raise OrderError(f"horizon {horizon} beyond depth {order.depth}")
        self.order = order
        self.level = n
        self.horizon = horizon
        self._pairs = None
        self._words = None

    @property
    def words(self):
        if self._words is None:
            out = []
            for top in range(self.level + 1, self.horizon + 1):
                out.extend(words_at(self.order, top, self.level))
            self._words = tuple(out)
        return self._words

    @property
    def pairs(self):
        """All two-letter factors as a frozenset of ``(x, y)``."""
        if self._pairs is None:
            self._pairs = frozenset(language_pairs(self.order, self.level, self.horizon))
        return self._pairs

    def factors(self, length):
        out = set()
        for w in self.words:
            s = w.letters
            for i in range(len(s) - length + 1):
                out.add(s[i:i + length])
        return out

    def __contains__(self, item):
        item = tuple(item)
        if len(item) == 1:
            return any(item[0] in w.letters for w in self.words)
        if len(item) == 2:
            return item in self.pairs
        return item in self.factors(len(item))


def language_pairs(order, n, horizon):
    """Two-letter factors of ``w(v, n, N')`` over ``v``, ``n < N' <= horizon``."""
    diagram = order.diagram
    # first/last letters and internal pairs per vertex, built upward
    first = {}
    last = {}
    inner = {}
    found = set()
    level = n + 1
    for v in diagram.vertices(level):
        s = order.letters(level, v)
        first[v], last[v] = s[0], s[-1]
        inner[v] = frozenset(zip(s, s[1:]))
        found |= inner[v]
    for level in range(n + 2, horizon + 1):
        f2, l2, i2 = {}, {}, {}
        for v in diagram.vertices(level):
            s = order.letters(level, v)
            acc = set()
            for x in set(s):
                acc |= inner[x]
            for x, y in zip(s, s[1:]):
                acc.add((last[x], first[y]))
            f2[v], l2[v], i2[v] = first[s[0]], last[s[-1]], frozenset(acc)
            found |= acc
        first, last, inner = f2, l2, i2
    return found


def level_language(order, n, horizon):
    return LevelLanguage(order, n, horizon)


def telescope_order(order, levels):
    """Lexicographic order induced on ``telescope(diagram, levels)``.

    Returns the new order; its ``diagram.paths`` maps new edges to old paths.
    """
    levels = list(levels)
    base = order.diagram
    if levels[-1] > base.depth:
        if not order.stationary:
            raise DiagramError(f"level {levels[-1]} beyond depth {base.depth}")
        order = order.extend(levels[-1])
        base = order.diagram
    new = telescope(base, levels)
    out = []
    for i in range(1, len(levels)):
        out.append([
            sorted(new.in_edges(i, v), key=lambda e: path_key(order, new.paths[e]))
            for v in new.vertices(i)
        ])
    return DiagramOrder(new, out)

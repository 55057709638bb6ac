"""Skeletons (designated extremal edges and vertices) and correspondences.

Levels follow the diagram: ``max_edge(n, v)`` is an edge of ``E_n`` into
``v`` in ``V_n``.  Level-1 edges leave the root and are carried along so the
whole order can be synthesised, but the skeleton invariants are only checked
from level 2 on.  The maximal and minimal vertex sets are given for every
level ``n >= 0`` with ``V~_0 = V-_0 = {root}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import EdgeId
from .ordering import DiagramOrder, language_pairs, telescope_order

__all__ = [
    "SkeletonError",
    "Skeleton",
    "Correspondence",
    "CorrespondenceReport",
    "Extraction",
    "skeleton_from_sources",
    "stationary_skeleton",
    "skeleton_from_order",
    "sigma_from_order",
    "correspondence_from_order",
    "validate_correspondence",
]


class SkeletonError(ValueError):
    pass


class Skeleton:
    """Extremal edges per vertex and extremal vertex sets per level."""

    def __init__(self, diagram, max_edges, min_edges, max_vertices, min_vertices):
        self.diagram = diagram
        self.depth = diagram.depth
        self._max = {n: tuple(EdgeId(*e) for e in max_edges[n]) for n in range(1, self.depth + 1)}
        self._min = {n: tuple(EdgeId(*e) for e in min_edges[n]) for n in range(1, self.depth + 1)}
        self.max_vertices = {n: frozenset(max_vertices[n]) for n in range(self.depth + 1)}
        self.min_vertices = {n: frozenset(min_vertices[n]) for n in range(self.depth + 1)}
        for n in range(1, self.depth + 1):
            for table in (self._max, self._min):
                if len(table[n]) != diagram.size(n):
                    raise SkeletonError(f"level {n}: need one extremal edge per vertex")
                for v, e in enumerate(table[n]):
                    if e.level != n or e.range != v or not diagram.has_edge(e):
                        raise SkeletonError(f"level {n} vertex {v}: {tuple(e)} is not an edge into it")

    def max_edge(self, n, v):
        return self._max[n][v]

    def min_edge(self, n, v):
        return self._min[n][v]

    def max_source(self, n, v):
        return self._max[n][v].source

    def min_source(self, n, v):
        return self._min[n][v].source

    def max_chain(self, n, v, m):
        """Level-``m`` vertex reached from ``v`` at level ``n`` along max edges."""
        for level in range(n, m, -1):
            v = self._max[level][v].source
        return v

    def min_chain(self, n, v, m):
        for level in range(n, m, -1):
            v = self._min[level][v].source
        return v

    def W(self, n, vt):
        """``W_vt(n)``: vertices of ``V_n`` whose max edge starts at ``vt``."""
        return frozenset(w for w in self.diagram.vertices(n) if self._max[n][w].source == vt)

    def Wp(self, n, vb):
        """``W'_vb(n)``: vertices of ``V_n`` whose min edge starts at ``vb``."""
        return frozenset(w for w in self.diagram.vertices(n) if self._min[n][w].source == vb)

    def cell_key(self, n, w):
        """``(vbar, vtilde)`` labelling the cell that contains ``w`` in ``V_n``."""
        return self._min[n][w].source, self._max[n][w].source

    def validate(self):
        """Violated invariants as a list of messages (empty when valid)."""
        problems = []
        d = self.diagram
        for n in range(self.depth + 1):
            for name, vs in (("maximal", self.max_vertices[n]), ("minimal", self.min_vertices[n])):
                if not vs:
                    problems.append(f"level {n}: empty {name} vertex set")
                if any(not 0 <= x < d.size(n) for x in vs):
                    problems.append(f"level {n}: {name} vertex out of range")
        for n in range(2, self.depth + 1):
            for v in d.vertices(n):
                if self._max[n][v].source not in self.max_vertices[n - 1]:
                    problems.append(f"level {n} vertex {v}: max edge source not maximal")
                if self._min[n][v].source not in self.min_vertices[n - 1]:
                    problems.append(f"level {n} vertex {v}: min edge source not minimal")
                both = v in self.max_vertices[n] and v in self.min_vertices[n]
                if both and self._max[n][v] == self._min[n][v]:
                    problems.append(f"level {n} vertex {v}: maximal and minimal edges coincide")
        for n in range(1, self.depth - 1):
            hit = {self._max[n + 1][v].source for v in self.max_vertices[n + 1]}
            for x in sorted(self.max_vertices[n] - hit):
                problems.append(f"level {n}: maximal vertex {x} is not extended upward")
            hit = {self._min[n + 1][v].source for v in self.min_vertices[n + 1]}
            for x in sorted(self.min_vertices[n] - hit):
                problems.append(f"level {n}: minimal vertex {x} is not extended upward")
        return problems

    def __eq__(self, other):
        if not isinstance(other, Skeleton):
            return NotImplemented
        return (self._max == other._max and self._min == other._min
                and self.max_vertices == other.max_vertices
                and self.min_vertices == other.min_vertices)

    def sources_equal(self, other):
        """Same extremal sources and vertex sets (copies ignored)."""
        if self.depth != other.depth:
            return False
        for n in range(1, self.depth + 1):
            for v in self.diagram.vertices(n):
                if self.max_source(n, v) != other.max_source(n, v):
                    return False
                if self.min_source(n, v) != other.min_source(n, v):
                    return False
        return self.max_vertices == other.max_vertices and self.min_vertices == other.min_vertices

    def to_json(self, sigma=None):
        levels = []
        for n in range(0, self.depth + 1):
            entry = {
                "level": n,
                "max_vertices": sorted(self.max_vertices[n]),
                "min_vertices": sorted(self.min_vertices[n]),
            }
            if n >= 1:
                entry["max_edge"] = [[e.source, e.copy] for e in self._max[n]]
                entry["min_edge"] = [[e.source, e.copy] for e in self._min[n]]
            if sigma is not None and n in sigma.maps:
                entry["sigma"] = {str(k): sorted(v) for k, v in sorted(sigma.maps[n].items())}
            levels.append(entry)
        return {"version": 1, "levels": levels}

    @classmethod
    def from_json(cls, diagram, data):
        """Parse skeleton JSON; returns ``(skeleton, correspondence or None)``."""
        levels = {entry["level"]: entry for entry in data["levels"]}
        depth = max(levels)
        if depth > diagram.depth:
            diagram = diagram.extend(depth)
        if depth < diagram.depth:
            diagram = diagram.truncate(depth)
        maxe, mine, maxv, minv = {}, {}, {}, {}
        maps = {}
        for n in range(0, depth + 1):
            entry = levels.get(n)
            if entry is None:
                if n == 0:
                    entry = {"max_vertices": [0], "min_vertices": [0]}
                else:
                    raise SkeletonError(f"skeleton JSON lacks level {n}")
            maxv[n] = entry["max_vertices"]
            minv[n] = entry["min_vertices"]
            if n >= 1:
                if "max_edge" in entry:
                    maxe[n] = [EdgeId(n, v, s, c) for v, (s, c) in enumerate(entry["max_edge"])]
                    mine[n] = [EdgeId(n, v, s, c) for v, (s, c) in enumerate(entry["min_edge"])]
                elif "max_sources" in entry:
                    m = diagram.matrix(n - 1)
                    maxe[n] = [EdgeId(n, v, s, m[v][s] - 1) for v, s in enumerate(entry["max_sources"])]
                    mine[n] = [EdgeId(n, v, s, 0) for v, s in enumerate(entry["min_sources"])]
                elif n == 1:
                    maxe[n], mine[n] = _root_edges(diagram)
                else:
                    raise SkeletonError(f"level {n}: missing max_edge/min_edge")
            if "sigma" in entry:
                maps[n] = {int(k): frozenset(v) for k, v in entry["sigma"].items()}
        skel = cls(diagram, maxe, mine, maxv, minv)
        return skel, (Correspondence(maps) if maps else None)


def _root_edges(diagram):
    col = diagram.matrix(0)
    maxe = [EdgeId(1, v, 0, col[v][0] - 1) for v in diagram.vertices(1)]
    mine = [EdgeId(1, v, 0, 0) for v in diagram.vertices(1)]
    return maxe, mine


def skeleton_from_sources(diagram, max_sources, min_sources, max_vertices, min_vertices):
    """Skeleton given by extremal *sources*.

    ``max_sources[n]`` / ``min_sources[n]`` list, for ``n >= 2``, the source of
    the designated edge of each vertex of ``V_n``; the maximal edge takes the
    last parallel copy and the minimal edge the first.  Level 1 (root edges)
    may be omitted.  ``max_vertices[n]`` / ``min_vertices[n]`` are given for
    ``n >= 1``; level 0 is the root.
    """
    depth = diagram.depth
    maxe, mine = {}, {}
    maxe[1], mine[1] = _root_edges(diagram)
    for n in range(2, depth + 1):
        m = diagram.matrix(n - 1)
        maxe[n] = [EdgeId(n, v, s, m[v][s] - 1) for v, s in enumerate(max_sources[n])]
        mine[n] = [EdgeId(n, v, s, 0) for v, s in enumerate(min_sources[n])]
        for v, s in enumerate(max_sources[n]):
            if m[v][s] == 0:
                raise SkeletonError(f"level {n} vertex {v}: no edge from {s}")
        for v, s in enumerate(min_sources[n]):
            if m[v][s] == 0:
                raise SkeletonError(f"level {n} vertex {v}: no edge from {s}")
    maxv = {0: {0}}
    minv = {0: {0}}
    for n in range(1, depth + 1):
        maxv[n] = max_vertices[n]
        minv[n] = min_vertices[n]
    return Skeleton(diagram, maxe, mine, maxv, minv)


def stationary_skeleton(diagram, max_sources, min_sources, max_vertices, min_vertices, depth):
    """Skeleton repeating the same source maps and vertex sets at every level >= 2.

    ``max_sources[v]`` / ``min_sources[v]`` give the extremal source of each
    vertex of the repeating block; the vertex sets hold from level 1 on.
    """
    if not diagram.stationary:
        raise SkeletonError("a stationary skeleton needs a stationary diagram")
    d = diagram.truncate(depth)
    levels = range(2, depth + 1)
    return skeleton_from_sources(
        d,
        {n: list(max_sources) for n in levels},
        {n: list(min_sources) for n in levels},
        {n: set(max_vertices) for n in range(1, depth + 1)},
        {n: set(min_vertices) for n in range(1, depth + 1)},
    )


class Correspondence:
    """Level maps ``sigma_n`` from maximal vertices to sets of minimal vertices."""

    def __init__(self, maps):
        self.maps = {int(n): {int(k): frozenset(v) for k, v in m.items()} for n, m in maps.items()}
        self.maps.setdefault(0, {0: frozenset({0})})

    @classmethod
    def constant(cls, mapping, levels):
        """The same map at every level in ``levels``."""
        return cls({n: dict(mapping) for n in levels})

    def image(self, n, vt):
        return self.maps[n][vt]

    def levels(self):
        return sorted(self.maps)

    def is_point_map(self, n):
        return all(len(v) == 1 for v in self.maps[n].values())

    def __eq__(self, other):
        if not isinstance(other, Correspondence):
            return NotImplemented
        return self.maps == other.maps

    def restrict(self, levels):
        return Correspondence({n: self.maps[n] for n in levels if n in self.maps})

    def to_json(self):
        return {
            "version": 1,
            "levels": [
                {"level": n, "sigma": {str(k): sorted(v) for k, v in sorted(m.items())}}
                for n, m in sorted(self.maps.items())
            ],
        }

    @classmethod
    def from_json(cls, data):
        return cls({e["level"]: {int(k): v for k, v in e["sigma"].items()} for e in data["levels"]})


@dataclass
class Extraction:
    """Result of :func:`skeleton_from_order`."""

    levels: list
    order: DiagramOrder
    skeleton: Skeleton

    @property
    def diagram(self):
        return self.order.diagram


def _chase(order, n, v, m, kind):
    pick = order.max_edge if kind == "max" else order.min_edge
    for level in range(n, m, -1):
        v = pick(level, v).source
    return v


def _extremal_sets(order, depth, kind):
    """Vertices on extremal edge chains reaching the top level."""
    sets = {depth: frozenset(order.diagram.vertices(depth))}
    pick = order.max_edge if kind == "max" else order.min_edge
    for n in range(depth - 1, -1, -1):
        sets[n] = frozenset(pick(n + 1, v).source for v in sets[n + 1])
    return sets


def skeleton_from_order(order, depth=None):
    """Telescope until every extremal edge starts at an extremal vertex.

    Extremal vertex sets are the vertices lying on extremal edge chains that
    survive to the last checked level.  The next kept level is always the
    smallest admissible one.
    """
    if depth is None:
        depth = order.depth
    if order.stationary or depth != order.depth:
        order = order.extend(depth).truncate(depth)
    if depth < 2:
        raise SkeletonError(f"depth {depth} too small to extract a skeleton (reached level {depth})")
    tmax = _extremal_sets(order, depth, "max")
    tmin = _extremal_sets(order, depth, "min")
    kept = [0, 1]
    a = 1
    while a < depth:
        for b in range(a + 1, depth + 1):
            if all(_chase(order, b, v, a, "max") in tmax[a] and _chase(order, b, v, a, "min") in tmin[a]
                   for v in order.diagram.vertices(b)):
                break
        kept.append(b)
        a = b
    if kept != list(range(depth + 1)):
        order = telescope_order(order, kept)
    d = order.diagram
    maxe = {n: [order.max_edge(n, v) for v in d.vertices(n)] for n in range(1, d.depth + 1)}
    mine = {n: [order.min_edge(n, v) for v in d.vertices(n)] for n in range(1, d.depth + 1)}
    maxv = _extremal_sets(order, d.depth, "max")
    minv = _extremal_sets(order, d.depth, "min")
    return Extraction(kept, order, Skeleton(d, maxe, mine, maxv, minv))


def sigma_from_order(order, skeleton, n, horizon):
    """``sigma_n(vt) = {vb : vt vb occurs in the level-n language}``."""
    pairs = language_pairs(order, n, horizon)
    return {
        vt: frozenset(vb for vb in skeleton.min_vertices[n] if (vt, vb) in pairs)
        for vt in sorted(skeleton.max_vertices[n])
    }


def correspondence_from_order(order, skeleton, horizon=None):
    """``sigma_n`` for ``1 <= n < horizon`` read off the language."""
    if horizon is None:
        horizon = skeleton.depth
    return Correspondence({n: sigma_from_order(order, skeleton, n, horizon) for n in range(1, horizon)})


@dataclass
class CorrespondenceReport:
    covering_failures: list = field(default_factory=list)
    shape_failures: list = field(default_factory=list)
    consistency_failures: list = field(default_factory=list)
    threads_ok: bool = True
    threads_unique: bool = True
    thread_counts: dict = field(default_factory=dict)
    point_map_from: int | None = None
    depth: int = 0
    assumptions: list = field(default_factory=lambda: [
        "extremal path sets closed and nowhere dense: assumed, not checked",
        "sigma is a homeomorphism: replaced by the thread check up to depth",
    ])

    @property
    def ok(self):
        return not (self.covering_failures or self.shape_failures
                    or self.consistency_failures) and self.threads_ok

    def to_json(self):
        return {
            "ok": self.ok,
            "depth": self.depth,
            "covering_failures": self.covering_failures,
            "shape_failures": self.shape_failures,
            "consistency_failures": self.consistency_failures,
            "threads_ok": self.threads_ok,
            "threads_unique_up_to_depth": self.threads_unique,
            "thread_counts": {str(k): v for k, v in sorted(self.thread_counts.items())},
            "point_map_from": self.point_map_from,
            "assumptions": self.assumptions,
        }


def validate_correspondence(diagram, skeleton, sigma, depth=None):
    """Covering, composition consistency, threads and point-map detection."""
    levels = [n for n in sigma.levels() if n >= 1]
    if depth is not None:
        levels = [n for n in levels if n <= depth]
    rep = CorrespondenceReport(depth=max(levels) if levels else 0)
    for n in levels:
        m = sigma.maps[n]
        if set(m) != set(skeleton.max_vertices[n]):
            rep.shape_failures.append(f"level {n}: sigma keys {sorted(m)} != maximal vertices "
                                      f"{sorted(skeleton.max_vertices[n])}")
        for vt, img in sorted(m.items()):
            if not img:
                rep.shape_failures.append(f"level {n}: sigma({vt}) is empty")
            if not img <= skeleton.min_vertices[n]:
                rep.shape_failures.append(f"level {n}: sigma({vt}) leaves the minimal vertices")
        union = frozenset().union(*m.values()) if m else frozenset()
        missing = skeleton.min_vertices[n] - union
        if missing:
            rep.covering_failures.append(f"level {n}: minimal vertices {sorted(missing)} not covered")
    for i, n in enumerate(levels):
        for big in levels[i + 1:]:
            for vt, img in sorted(sigma.maps[big].items()):
                x = skeleton.max_chain(big, vt, n)
                for vb in sorted(img):
                    y = skeleton.min_chain(big, vb, n)
                    if y not in sigma.maps[n].get(x, ()):
                        rep.consistency_failures.append(
                            f"sigma_{big}({vt}) contains {vb} but sigma_{n}({x}) lacks {y}")
    if levels:
        top = levels[-1]
        counts = {}
        for vt in sorted(sigma.maps[top]):
            good = 0
            for vb in sigma.maps[top][vt]:
                if all(skeleton.min_chain(top, vb, n) in sigma.maps[n].get(skeleton.max_chain(top, vt, n), ())
                       for n in levels):
                    good += 1
            counts[vt] = good
        rep.thread_counts = counts
        rep.threads_ok = all(c >= 1 for c in counts.values())
        rep.threads_unique = all(c == 1 for c in counts.values())
        covered_min = set()
        for vt in sigma.maps[top]:
            for vb in sigma.maps[top][vt]:
                covered_min.add(vb)
        if set(skeleton.min_vertices[top]) - covered_min:
            rep.threads_ok = False
        start = None
        for n in reversed(levels):
            if sigma.is_point_map(n):
                start = n
            else:
                break
        rep.point_map_from = start
    return rep


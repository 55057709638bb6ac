"""Balance relations, their integer solutions and the Eulerian word builder.

Every edge into ``u`` except the maximal one *departs*: the next edge in the
order starts at a vertex whose minimal edge has some source ``vb``.  A
decomposition fixes, for each source ``w`` and each admissible ``vb``, how
many departures from ``w`` land in ``W'_vb``.  Words are then built by a walk
through the cells that spends these tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .diagram import EdgeId
from .hgraph import build_graph, connectivity, crossing_numbers
from .ordering import DiagramOrder

__all__ = [
    "SynthesisError",
    "NotPositivelyConnected",
    "Infeasible",
    "Stuck",
    "ModifiedMatrices",
    "BalanceDecomposition",
    "BalanceReport",
    "SynthesizedWord",
    "modified_matrices",
    "check_balance",
    "solve_decomposition",
    "synthesize_vertex_order",
    "synthesize_order",
    "synthesize_stationary",
]


class SynthesisError(RuntimeError):
    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or []


class NotPositivelyConnected(SynthesisError):
    pass


class Infeasible(SynthesisError):
    pass


class Stuck(SynthesisError):
    def __init__(self, message, state):
        super().__init__(message)
        self.state = state


@dataclass
class ModifiedMatrices:
    level: int
    tilde: list
    bar: list


def modified_matrices(diagram, skeleton, n):
    """``F_n`` with the maximal (resp. minimal) edge of each row removed."""
    if n + 1 > skeleton.depth:
        raise SynthesisError(f"skeleton stops at level {skeleton.depth}, need level {n + 1}")
    m = diagram.matrix(n)
    tilde, bar = [], []
    for u, row in enumerate(m):
        t, b = list(row), list(row)
        t[skeleton.max_source(n + 1, u)] -= 1
        b[skeleton.min_source(n + 1, u)] -= 1
        tilde.append(t)
        bar.append(b)
    return ModifiedMatrices(n, tilde, bar)


@dataclass
class BalanceDecomposition:
    """Departure counts ``counts[(w, vb)]`` for the edges into ``u``."""

    level: int
    u: int
    counts: dict

    def get(self, w, vb):
        return self.counts.get((w, vb), 0)

    def to_json(self):
        return {
            "level": self.level,
            "u": self.u,
            "counts": [[w, vb, c] for (w, vb), c in sorted(self.counts.items())],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["level"], data["u"], {(w, vb): c for w, vb, c in data["counts"]})


@dataclass
class BalanceReport:
    ok: bool
    violations: list = field(default_factory=list)
    relations: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "violations": self.violations, "relations": self.relations}


def _image(sigma, n, vt):
    return sigma.maps[n - 1].get(vt, frozenset())


def check_balance(diagram, skeleton, sigma, n, u, decomposition):
    """Row-sum and balance relations for the edges into ``u`` in ``V_{n+1}``."""
    mod = modified_matrices(diagram, skeleton, n)
    ft, fb = mod.tilde[u], mod.bar[u]
    rep = BalanceReport(ok=True)
    for (w, vb), c in sorted(decomposition.counts.items()):
        if c < 0:
            rep.violations.append(f"negative count at w={w}, vbar={vb}")
        if vb not in _image(sigma, n, skeleton.max_source(n, w)):
            if c:
                rep.violations.append(f"w={w} may not depart to vbar={vb}")
    for w in diagram.vertices(n):
        vt = skeleton.max_source(n, w)
        got = sum(decomposition.get(w, vb) for vb in _image(sigma, n, vt))
        rep.relations.append({"kind": "row", "w": w, "lhs": got, "rhs": ft[w]})
        if got != ft[w]:
            rep.violations.append(f"row w={w}: {got} != {ft[w]}")
    for vb in sorted(skeleton.min_vertices[n - 1]):
        lhs = sum(decomposition.get(w, vb) for w in diagram.vertices(n)
                  if vb in _image(sigma, n, skeleton.max_source(n, w)))
        rhs = sum(fb[w] for w in skeleton.Wp(n, vb))
        rep.relations.append({"kind": "balance", "vbar": vb, "lhs": lhs, "rhs": rhs})
        if lhs != rhs:
            rep.violations.append(f"balance vbar={vb}: {lhs} != {rhs}")
    rep.ok = not rep.violations
    return rep


def solve_decomposition(diagram, skeleton, sigma, n, u):
    """Integer decomposition via max-flow, or raise :class:`Infeasible`."""
    mod = modified_matrices(diagram, skeleton, n)
    ft, fb = mod.tilde[u], mod.bar[u]
    g = nx.DiGraph()
    g.add_node("s")
    supply = 0
    for w in diagram.vertices(n):
        if ft[w]:
            g.add_edge("s", ("w", w), capacity=ft[w])
            supply += ft[w]
            for vb in sorted(_image(sigma, n, skeleton.max_source(n, w))):
                g.add_edge(("w", w), ("b", vb))
    demand = 0
    for vb in sorted(skeleton.min_vertices[n - 1]):
        need = sum(fb[w] for w in skeleton.Wp(n, vb))
        if need:
            g.add_edge(("b", vb), "t", capacity=need)
            demand += need
    if supply != demand:
        raise Infeasible(f"level {n}, u={u}: {supply} departures but {demand} arrivals")
    if supply == 0:
        return BalanceDecomposition(n, u, {})
    if "t" not in g:
        raise Infeasible(f"level {n}, u={u}: nowhere to arrive")
    value, flow = nx.maximum_flow(g, "s", "t")
    if value != supply:
        raise Infeasible(f"level {n}, u={u}: only {value} of {supply} departures can be matched")
    counts = {}
    for node, out in flow.items():
        if isinstance(node, tuple) and node[0] == "w":
            for dst, x in out.items():
                if x:
                    counts[(node[1], dst[1])] = x
    return BalanceDecomposition(n, u, counts)


@dataclass
class SynthesizedWord:
    level: int
    u: int
    edges: tuple
    walk: list
    trace: list

    @property
    def letters(self):
        return tuple(e.source for e in self.edges)

    def to_json(self, diagram=None):
        name = (lambda v: diagram.name(self.level, v)) if diagram else str
        return {
            "level": self.level,
            "u": self.u,
            "word": [name(x) for x in self.letters],
            "edges": [[e.source, e.copy] for e in self.edges],
            "walk": self.walk,
            "trace": self.trace,
        }


class _Walk:
    """Mutable state of one word construction."""

    def __init__(self, diagram, skeleton, sigma, n, u, decomposition, graph):
        self.d, self.sk, self.sigma, self.n, self.u = diagram, skeleton, sigma, n, u
        self.graph = graph
        self.tokens = dict(decomposition.counts)
        self.first = skeleton.min_edge(n + 1, u)
        self.last = skeleton.max_edge(n + 1, u)
        self.free = {}
        for e in diagram.in_edges(n + 1, u):
            if e not in (self.first, self.last):
                self.free.setdefault(e.source, []).append(e)
        self.total = len(diagram.in_edges(n + 1, u))
        self.edges = [self.first]
        self.trace = []
        self.looped = set()

    def departures(self, w):
        return sum(c for (x, _), c in self.tokens.items() if x == w)

    def can_land(self, w):
        if self.free.get(w):
            return True
        return w == self.last.source and len(self.edges) == self.total - 1

    def landings(self, w):
        """``(w2, vb)`` pairs reachable from ``w`` with one token."""
        out = []
        vt = self.sk.max_source(self.n, w)
        for vb in sorted(self.sigma.maps[self.n - 1].get(vt, ())):
            if self.tokens.get((w, vb), 0) <= 0:
                continue
            for w2 in sorted(self.sk.Wp(self.n, vb)):
                if self.can_land(w2):
                    out.append((w2, vb))
        return out

    def take(self, w, w2, vb, why):
        self.tokens[(w, vb)] -= 1
        if self.free.get(w2):
            e = self.free[w2].pop(0)
        else:
            e = self.last
        self.edges.append(e)
        self.trace.append({"from": w, "to": w2, "vbar": vb, "rule": why,
                           "cell": list(self.graph.cell_of(w2))})
        return w2

    def state(self):
        return {
            "level": self.n,
            "u": self.u,
            "word": [e.source for e in self.edges],
            "tokens": [[w, vb, c] for (w, vb), c in sorted(self.tokens.items()) if c],
            "unused": {str(w): len(es) for w, es in sorted(self.free.items()) if es},
        }


def _cell_remaining(walk, key):
    return sum(len(walk.free.get(w, ())) for w in walk.graph.cell(key).members)


def synthesize_vertex_order(diagram, skeleton, sigma, n, u, decomposition=None, graph=None):
    """Order the edges into ``u`` in ``V_{n+1}`` by a walk through the cells of ``V_n``.

    The walk starts with the minimal edge.  A successor cell carrying a loop
    and unused edges is entered first and looped around while its in-cell
    tokens last (one token is kept to leave).  Otherwise the landing vertex
    with the most departures left wins, lowest index on ties.  The maximal
    edge is held back until it is the only edge left.
    """
    if graph is None:
        graph = build_graph(diagram, skeleton, sigma, n)
    cr = crossing_numbers(diagram, skeleton, graph, u)
    conn = connectivity(graph, cr)
    if not conn.positively_strong:
        raise NotPositivelyConnected(
            f"level {n}, u={u}: cells are not positively strongly connected ({conn.witness})",
            [{"level": n, "u": u, "witness": conn.witness}])
    if decomposition is None:
        decomposition = solve_decomposition(diagram, skeleton, sigma, n, u)
    else:
        rep = check_balance(diagram, skeleton, sigma, n, u, decomposition)
        if not rep.ok:
            raise Infeasible(f"level {n}, u={u}: " + "; ".join(rep.violations))
    walk = _Walk(diagram, skeleton, sigma, n, u, decomposition, graph)
    cur = walk.first.source
    while len(walk.edges) < walk.total:
        options = walk.landings(cur)
        if not options:
            raise Stuck(f"level {n}, u={u}: no admissible continuation", walk.state())
        pick = None
        for w2, vb in options:
            key = graph.cell_of(w2)
            if graph.has_loop(key) and key not in walk.looped and _cell_remaining(walk, key) > 0:
                pick = (w2, vb)
                break
        if pick is not None:
            key = graph.cell_of(pick[0])
            walk.looped.add(key)
            cur = walk.take(cur, pick[0], pick[1], "enter loop")
            vb_cell = key[0]
            budget = sum(walk.tokens.get((w, vb_cell), 0) for w in graph.cell(key).members) - 1
            for _ in range(max(budget, 0)):
                if walk.tokens.get((cur, vb_cell), 0) <= 0:
                    break
                inside = [w for w in graph.cell(key).members if walk.free.get(w)]
                if not inside:
                    break
                cur = walk.take(cur, inside[0], vb_cell, "loop")
            continue
        best = max(options, key=lambda o: (walk.departures(o[0]), -o[0]))
        cur = walk.take(cur, best[0], best[1], "most departures")
    word = SynthesizedWord(n + 1, u, tuple(walk.edges),
                           [list(graph.cell_of(e.source)) for e in walk.edges], walk.trace)
    _post_check(diagram, skeleton, sigma, n, u, word, cr)
    return word


def _post_check(diagram, skeleton, sigma, n, u, word, crossings):
    """Endpoints, letter counts, successor law and per-cell crossing counts."""
    edges = word.edges
    assert edges[0] == skeleton.min_edge(n + 1, u), "word must open with the minimal edge"
    assert edges[-1] == skeleton.max_edge(n + 1, u), "word must close with the maximal edge"
    assert sorted(edges) == sorted(diagram.in_edges(n + 1, u)), "every edge exactly once"
    for a, b in zip(edges, edges[1:]):
        vt = skeleton.max_source(n, a.source)
        assert skeleton.min_source(n, b.source) in sigma.maps[n - 1].get(vt, ()), \
            f"successor law fails between {a.source} and {b.source}"
    visits = {}
    for e in edges[:-1]:
        key = skeleton.cell_key(n, e.source)
        visits[key] = visits.get(key, 0) + 1
    for key, p in crossings.counts.items():
        assert visits.get(key, 0) == p, f"cell {key} visited {visits.get(key, 0)} times, expected {p}"


def _root_word(diagram, skeleton, u):
    first, last = skeleton.min_edge(1, u), skeleton.max_edge(1, u)
    middle = [e for e in diagram.in_edges(1, u) if e not in (first, last)]
    return [first] + middle + ([last] if last != first else [])


def synthesize_order(diagram, skeleton, sigma, depth=None, decompositions=None):
    """Assemble words for every vertex up to ``depth`` into a :class:`DiagramOrder`.

    Failures at any ``(level, u)`` are collected and raised together.
    """
    if depth is None:
        depth = skeleton.depth
    decompositions = decompositions or {}
    levels = [[_root_word(diagram, skeleton, u) for u in diagram.vertices(1)]]
    words = {}
    failures = []
    for n in range(1, depth):
        graph = build_graph(diagram, skeleton, sigma, n)
        row = []
        for u in diagram.vertices(n + 1):
            try:
                w = synthesize_vertex_order(diagram, skeleton, sigma, n, u,
                                            decompositions.get((n, u)), graph)
            except SynthesisError as exc:
                failures.append({"level": n, "u": u, "error": type(exc).__name__, "message": str(exc)})
                row.append(list(diagram.in_edges(n + 1, u)))
                continue
            words[(n, u)] = w
            row.append(list(w.edges))
        levels.append(row)
    if failures:
        kind = NotPositivelyConnected if all(f["error"] == "NotPositivelyConnected" for f in failures) \
            else SynthesisError
        raise kind(f"{len(failures)} vertex word(s) could not be built", failures)
    order = DiagramOrder(diagram.truncate(depth), levels)
    return order, words


def synthesize_stationary(diagram, max_sources, min_sources, max_vertices, min_vertices, sigma_map):
    """Stationary order whose repeating level is built from the stationary skeleton.

    Returns ``(order, words)``; ``words[u]`` is the synthesised word of the block.
    """
    from .skeleton import Correspondence, stationary_skeleton, validate_correspondence

    sk = stationary_skeleton(diagram, max_sources, min_sources, max_vertices, min_vertices, 3)
    sigma = Correspondence.constant(sigma_map, range(1, 4))
    rep = validate_correspondence(sk.diagram, sk, sigma)
    if not rep.ok:
        problems = rep.shape_failures + rep.covering_failures + rep.consistency_failures
        raise SynthesisError("sigma is not a correspondence for this skeleton",
                             [{"message": m} for m in problems] or [{"message": "threads fail"}])
    d = sk.diagram
    graph = build_graph(d, sk, sigma, 2)
    words = {}
    for u in d.vertices(3):
        words[u] = synthesize_vertex_order(d, sk, sigma, 2, u, None, graph)
    block = diagram.matrix(diagram.depth - 1)
    base = diagram.truncate(2)
    from .diagram import BratteliDiagram
    stat = BratteliDiagram(base.matrices, stationary=True, names=diagram.names)
    if stat.matrix(1) != block:
        raise SynthesisError("the first non-root level must already be the repeating block")
    lv1 = [_root_word(stat, sk, u) for u in stat.vertices(1)]
    lv2 = [[EdgeId(2, u, e.source, e.copy) for e in words[u].edges] for u in stat.vertices(2)]
    return DiagramOrder(stat, [lv1, lv2], stationary=True), words

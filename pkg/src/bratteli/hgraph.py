"""Cells of a level and the directed graph they span.

A level-``n`` cell collects the vertices of ``V_n`` whose minimal edge starts
at ``vbar`` and whose maximal edge starts at ``vtilde``.  Cell ``[., vt]``
points at ``[vb', .]`` when ``vb'`` is in ``sigma_{n-1}(vt)``; a word over
``V_n`` respecting the successor law is a walk in this graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

__all__ = [
    "Cell",
    "AssociatedGraph",
    "CrossingNumbers",
    "Connectivity",
    "build_cells",
    "build_graph",
    "crossing_numbers",
    "connectivity",
    "export_dot",
]


@dataclass(frozen=True, order=True)
class Cell:
    vbar: int
    vtilde: int
    level: int
    members: tuple

    @property
    def key(self):
        return (self.vbar, self.vtilde)

    def label(self, diagram=None):
        if diagram is None:
            return f"[{self.vbar},{self.vtilde}]"
        n = self.level - 1
        return f"[{diagram.name(n, self.vbar)},{diagram.name(n, self.vtilde)}]"


def build_cells(diagram, skeleton, n):
    """Common refinement of the max-source and min-source partitions of ``V_n``."""
    groups = {}
    for w in diagram.vertices(n):
        groups.setdefault(skeleton.cell_key(n, w), []).append(w)
    return [Cell(vb, vt, n, tuple(ws)) for (vb, vt), ws in sorted(groups.items())]


@dataclass
class AssociatedGraph:
    level: int
    cells: list
    edges: frozenset
    diagram: object = None

    def __post_init__(self):
        self._by_key = {c.key: c for c in self.cells}
        self._cell_of = {w: c.key for c in self.cells for w in c.members}

    def cell(self, key):
        return self._by_key[key]

    def cell_of(self, w):
        """Key of the cell holding vertex ``w`` of ``V_n``."""
        return self._cell_of[w]

    def successors(self, key):
        return [b for (a, b) in sorted(self.edges) if a == key]

    def has_loop(self, key):
        return (key, key) in self.edges

    def label(self, key):
        return self._by_key[key].label(self.diagram)

    def to_networkx(self, keys=None):
        g = nx.DiGraph()
        keys = [c.key for c in self.cells] if keys is None else list(keys)
        g.add_nodes_from(keys)
        ks = set(keys)
        g.add_edges_from((a, b) for a, b in self.edges if a in ks and b in ks)
        return g

    def to_json(self):
        return {
            "level": self.level,
            "cells": [{"label": c.label(self.diagram), "vbar": c.vbar, "vtilde": c.vtilde,
                       "members": list(c.members)} for c in self.cells],
            "edges": [[self.label(a), self.label(b)] for a, b in sorted(self.edges)],
        }


def build_graph(diagram, skeleton, sigma, n):
    cells = build_cells(diagram, skeleton, n)
    img = sigma.maps[n - 1]
    edges = frozenset(
        (a.key, b.key)
        for a in cells for b in cells
        if b.vbar in img.get(a.vtilde, ())
    )
    return AssociatedGraph(n, cells, edges, diagram)


@dataclass
class CrossingNumbers:
    """Crossings per cell for the edges into ``u`` (the maximal edge excluded)."""

    u: int
    counts: dict
    terminal: tuple

    def positive(self):
        return [k for k, p in sorted(self.counts.items()) if p > 0]


def crossing_numbers(diagram, skeleton, graph, u):
    n = graph.level
    row = list(diagram.matrix(n)[u])
    row[skeleton.max_source(n + 1, u)] -= 1
    counts = {c.key: sum(row[w] for w in c.members) for c in graph.cells}
    return CrossingNumbers(u, counts, graph.cell_of(skeleton.max_source(n + 1, u)))


@dataclass
class Connectivity:
    strong: bool
    weak: bool
    sccs: list
    positively_strong: bool | None = None
    witness: str | None = None
    used_cells: list = field(default_factory=list)

    def to_json(self, graph):
        out = {
            "strong": self.strong,
            "weak": self.weak,
            "sccs": [[graph.label(k) for k in comp] for comp in self.sccs],
        }
        if self.positively_strong is not None:
            out["positively_strong"] = self.positively_strong
            out["cells_with_crossings"] = [graph.label(k) for k in self.used_cells]
            if self.witness:
                out["witness"] = self.witness
        return out


def _sorted_sccs(g):
    return sorted((sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])


def _unreachable_witness(graph, g):
    """Name a pair of cells with no path between them, or ``None``."""
    comps = _sorted_sccs(g)
    if len(comps) <= 1:
        return None
    where = {k: i for i, comp in enumerate(comps) for k in comp}
    out = {i: set() for i in range(len(comps))}
    for a, b in g.edges:
        if where[a] != where[b]:
            out[where[a]].add(where[b])
    sink = next(i for i in range(len(comps)) if not out[i])
    src = comps[sink][0]
    dst = min(k for k in g.nodes if where[k] != sink)
    return f"no path from {graph.label(src)} to {graph.label(dst)}"


def connectivity(graph, crossings=None):
    """Strong and weak connectivity, plus positive strong connectivity for ``u``.

    Positive strong connectivity looks at the subgraph induced on cells with a
    positive crossing number; it holds vacuously when at most one edge enters
    ``u``.
    """
    g = graph.to_networkx()
    sccs = _sorted_sccs(g)
    rep = Connectivity(
        strong=len(sccs) == 1,
        weak=nx.is_weakly_connected(g) if g.number_of_nodes() else True,
        sccs=sccs,
    )
    if crossings is not None:
        used = crossings.positive()
        rep.used_cells = used
        sub = graph.to_networkx(used)
        if len(used) <= 1:
            rep.positively_strong = True
        else:
            rep.positively_strong = nx.is_strongly_connected(sub)
        if not rep.positively_strong:
            rep.witness = _unreachable_witness(graph, sub)
    return rep


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph, crossings=None, name=None):
    """Graphviz digraph of the cells; crossing numbers shown when given."""
    title = name or f"H_{graph.level}" + (f"_u{crossings.u}" if crossings else "")
    lines = [f"digraph {_quote(title)} {{"]
    for c in graph.cells:
        label = c.label(graph.diagram)
        attrs = [f"label={_quote(label)}"]
        if crossings is not None:
            attrs = [f"label={_quote(f'{label} P={crossings.counts[c.key]}')}"]
            if c.key == crossings.terminal:
                attrs.append("peripheries=2")
        lines.append(f"  {_quote(label)} [{', '.join(attrs)}];")
    for a, b in sorted(graph.edges):
        lines.append(f"  {_quote(graph.label(a))} -> {_quote(graph.label(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"

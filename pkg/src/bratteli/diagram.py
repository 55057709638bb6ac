"""Finite-depth Bratteli diagrams.

A diagram of depth ``N`` has levels ``0..N``; level 0 is the single root
vertex.  ``F_n`` (``matrix(n)``) is the ``|V_{n+1}| x |V_n|`` incidence
matrix whose entry ``(v, w)`` counts edges from ``w`` in ``V_n`` to ``v`` in
``V_{n+1}``.  Edges are identified by ``EdgeId(level, range, source, copy)``
where ``level`` is the level of the range vertex.

A diagram flagged ``stationary`` repeats its last (square) matrix forever;
:meth:`BratteliDiagram.extend` materialises further levels on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import NamedTuple

__all__ = [
    "DiagramError",
    "EdgeId",
    "BratteliDiagram",
    "DiagramClass",
    "build_diagram",
    "incidence_matrix",
    "telescope",
    "classify",
    "matmul",
    "product_matrix",
]


class DiagramError(ValueError):
    """Raised for structurally invalid diagram input."""


class EdgeId(NamedTuple):
    level: int
    range: int
    source: int
    copy: int


def matmul(a, b):
    """Integer matrix product of two row-major nested sequences."""
    if not a:
        return ()
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(len(row))) for j in range(cols))
        for row in a
    )


def _freeze(matrix):
    return tuple(tuple(int(x) for x in row) for row in matrix)


class BratteliDiagram:
    """Immutable leveled multigraph given by its incidence matrices."""

    def __init__(self, matrices, stationary=False, names=None, paths=None, parent=None):
        matrices = tuple(_freeze(m) for m in matrices)
        if not matrices:
            raise DiagramError("diagram must have depth at least 1")
        if len(matrices[0]) == 0 or any(len(row) != 1 for row in matrices[0]):
            raise DiagramError("first matrix must have a single column (level 0 is one vertex)")
        for n, m in enumerate(matrices):
            if not m or not m[0]:
                raise DiagramError(f"matrix {n} is empty")
            width = len(m[0])
            if any(len(row) != width for row in m):
                raise DiagramError(f"matrix {n} is ragged")
            if any(x < 0 for row in m for x in row):
                raise DiagramError(f"matrix {n} has a negative entry")
            if n > 0 and width != len(matrices[n - 1]):
                raise DiagramError(
                    f"dimension mismatch: matrix {n} has {width} columns but level {n} "
                    f"has {len(matrices[n - 1])} vertices"
                )
            for v, row in enumerate(m):
                if not any(row):
                    raise DiagramError(f"vertex {v} at level {n + 1} has no incoming edges")
            for w in range(width):
                if not any(row[w] for row in m):
                    raise DiagramError(f"vertex {w} at level {n} has no outgoing edges")
        if stationary and len(matrices[-1]) != len(matrices[-1][0]):
            raise DiagramError("a stationary block must be a square matrix")
        self._matrices = matrices
        self.stationary = bool(stationary)
        self.names = names
        # telescoped diagrams: EdgeId -> path of parent edges (lowest first)
        self.paths = paths
        self.parent = parent
        self._in_edges = {}

    # basic shape

    @property
    def depth(self):
        return len(self._matrices)

    @property
    def vertex_counts(self):
        return (1,) + tuple(len(m) for m in self._matrices)

    @property
    def matrices(self):
        return self._matrices

    def size(self, n):
        """Number of vertices at level ``n``."""
        if n == 0:
            return 1
        return len(self.matrix(n - 1))

    def vertices(self, n):
        return range(self.size(n))

    def matrix(self, n):
        """``F_n``; stationary diagrams answer for any ``n``."""
        if n < 0:
            raise DiagramError(f"level {n} out of range")
        if n >= self.depth:
            if not self.stationary:
                raise DiagramError(f"matrix {n} beyond depth {self.depth}")
            return self._matrices[-1]
        return self._matrices[n]

    def extend(self, depth):
        """Stationary diagrams grown (never shrunk) to at least ``depth``."""
        if depth <= self.depth:
            return self
        if not self.stationary:
            raise DiagramError(f"cannot extend a non-stationary diagram to depth {depth}")
        extra = (self._matrices[-1],) * (depth - self.depth)
        names = self.names
        if names is not None:
            names = list(names) + [names[-1]] * (depth - self.depth)
        return BratteliDiagram(self._matrices + extra, stationary=True, names=names)

    def truncate(self, depth):
        """The first ``depth`` levels as a plain finite diagram."""
        d = self.extend(depth) if depth > self.depth else self
        names = None if self.names is None else list(d.names)[: depth + 1]
        return BratteliDiagram(d.matrices[:depth], stationary=False, names=names)

    # edges

    def in_edges(self, n, v):
        """Edges of ``E_n`` with range ``v``, ordered by (source, copy)."""
        key = (n, v)
        edges = self._in_edges.get(key)
        if edges is None:
            if n < 1:
                raise DiagramError("level 0 has no incoming edges")
            row = self.matrix(n - 1)[v]
            edges = tuple(
                EdgeId(n, v, w, c) for w, f in enumerate(row) for c in range(f)
            )
            self._in_edges[key] = edges
        return edges

    def edges(self, n):
        return tuple(e for v in self.vertices(n) for e in self.in_edges(n, v))

    def has_edge(self, e):
        try:
            return 0 <= e.copy < self.matrix(e.level - 1)[e.range][e.source]
        except (IndexError, DiagramError):
            return False

    def root_path(self, e):
        """Path in the first untelescoped ancestor represented by ``e``."""
        if self.paths is None:
            return (e,)
        return tuple(x for p in self.paths[e] for x in self.parent.root_path(p))

    def in_degree(self, n, v):
        return sum(self.matrix(n - 1)[v])

    def name(self, n, v):
        if self.names is not None and n < len(self.names) and self.names[n]:
            return self.names[n][v]
        if n == 0:
            return "v0"
        return str(v)

    def __eq__(self, other):
        if not isinstance(other, BratteliDiagram):
            return NotImplemented
        return self._matrices == other._matrices and self.stationary == other.stationary

    def __hash__(self):
        return hash((self._matrices, self.stationary))

    def __repr__(self):
        kind = "stationary " if self.stationary else ""
        return f"<{kind}BratteliDiagram depth={self.depth} sizes={self.vertex_counts}>"

    # serialisation

    def to_json(self):
        out = {
            "version": 1,
            "levels": list(self.vertex_counts),
            "matrices": [[list(r) for r in m] for m in self._matrices],
            "stationary": self.stationary,
        }
        if self.names is not None:
            out["names"] = [list(x) for x in self.names]
        return out


def build_diagram(spec=None, *, matrices=None, edges=None, levels=None,
                  stationary=False, names=None, depth=None):
    """Build a diagram from a JSON-like dict, a matrix list or edge lists.

    ``edges`` is a list per level ``n = 1..N`` of ``[source, range]`` pairs;
    parallel edges are given by repetition.  ``levels`` lists ``|V_n|``.
    """
    if isinstance(spec, dict):
        if spec.get("version", 1) != 1:
            raise DiagramError(f"unsupported diagram version {spec.get('version')!r}")
        matrices = spec.get("matrices")
        edges = spec.get("edges")
        levels = spec.get("levels")
        stationary = spec.get("stationary", False)
        names = spec.get("names")
        depth = spec.get("depth", depth)
    elif spec is not None:
        matrices = spec
    if (matrices is None) == (edges is None):
        raise DiagramError("give exactly one of 'matrices' or 'edges'")
    if edges is not None:
        if levels is None:
            raise DiagramError("edge lists need 'levels'")
        if len(levels) != len(edges) + 1:
            raise DiagramError("'levels' must have one more entry than 'edges'")
        if levels[0] != 1:
            raise DiagramError("level 0 must be a single vertex")
        matrices = []
        for n, level_edges in enumerate(edges, start=1):
            m = [[0] * levels[n - 1] for _ in range(levels[n])]
            for pair in level_edges:
                s, r = pair
                if not (0 <= s < levels[n - 1] and 0 <= r < levels[n]):
                    raise DiagramError(f"edge {pair} at level {n} out of range")
                m[r][s] += 1
            matrices.append(m)
    elif levels is not None:
        counts = [1] + [len(m) for m in matrices]
        if list(levels)[: len(counts)] != counts[: len(levels)] or len(levels) != len(counts):
            raise DiagramError(f"'levels' {list(levels)} disagrees with matrices {counts}")
    if names is not None:
        names = [list(x) for x in names]
    diagram = BratteliDiagram(matrices, stationary=stationary, names=names)
    if depth is not None:
        diagram = diagram.extend(depth)
    return diagram


def incidence_matrix(diagram, n):
    """``F_n`` recounted from the edge list."""
    if n < 0 or (n >= diagram.depth and not diagram.stationary):
        raise DiagramError(f"no incidence matrix at level {n} (depth {diagram.depth})")
    rows = []
    for v in range(diagram.size(n + 1)):
        counts = [0] * diagram.size(n)
        for e in diagram.in_edges(n + 1, v):
            counts[e.source] += 1
        rows.append(tuple(counts))
    return tuple(rows)


def product_matrix(diagram, m, n):
    """``F^{(m,n)} = F_{n-1} ... F_m`` counting paths from level m to level n."""
    if m > n:
        raise DiagramError("product needs m <= n")
    size = diagram.size(m)
    result = tuple(tuple(int(i == j) for j in range(size)) for i in range(size))
    for k in range(m, n):
        result = matmul(diagram.matrix(k), result)
    return result


def _paths_between(diagram, a, b, v):
    """All paths from level ``a`` to vertex ``v`` at level ``b`` (edge tuples)."""
    if a == b:
        return [()]
    out = []
    for e in diagram.in_edges(b, v):
        for p in _paths_between(diagram, a, b - 1, e.source):
            out.append(p + (e,))
    return out


def telescope(diagram, levels):
    """Keep only ``levels``; new edges are the old paths between kept levels.

    The result carries ``paths``: new ``EdgeId`` -> tuple of edges of
    ``diagram`` (lowest level first) and ``parent`` (the input diagram).
    Copies between a fixed source and range are numbered in the sorted order
    of their paths.
    """
    levels = list(levels)
    if len(levels) < 2 or levels[0] != 0:
        raise DiagramError("telescoping levels must start at 0 and have length >= 2")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise DiagramError("telescoping levels must be strictly increasing")
    if levels[-1] > diagram.depth:
        if not diagram.stationary:
            raise DiagramError(f"level {levels[-1]} beyond depth {diagram.depth}")
        diagram = diagram.extend(levels[-1])
    matrices = []
    paths = {}
    for i, (a, b) in enumerate(zip(levels, levels[1:]), start=1):
        rows = []
        for v in range(diagram.size(b)):
            by_source = {}
            for p in sorted(_paths_between(diagram, a, b, v)):
                by_source.setdefault(p[0].source, []).append(p)
            row = [0] * diagram.size(a)
            for w in sorted(by_source):
                for c, p in enumerate(by_source[w]):
                    paths[EdgeId(i, v, w, c)] = p
                row[w] = len(by_source[w])
            rows.append(row)
        matrices.append(rows)
    names = None
    if diagram.names is not None:
        names = [diagram.names[k] if k < len(diagram.names) else diagram.names[-1] for k in levels]
    return BratteliDiagram(matrices, stationary=False, names=names, paths=paths, parent=diagram)


@dataclass
class DiagramClass:
    """Structural flags of a finite-depth diagram."""

    checked_depth: int
    simple: bool | None = None
    simple_witness: tuple | None = None
    finite_rank: bool = True
    rank: int = 0
    stationary: bool = False
    periodic_candidate: bool = False
    class_A: bool = False
    k: int = 0
    component_sizes: list = field(default_factory=list)
    c_blocks: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)

    def to_json(self):
        return {
            "checked_depth": self.checked_depth,
            "simple": self.simple,
            "simple_witness": list(self.simple_witness) if self.simple_witness else None,
            "finite_rank": self.finite_rank,
            "rank": self.rank,
            "stationary": self.stationary,
            "periodic_candidate": self.periodic_candidate,
            "class_A": self.class_A,
            "k": self.k,
            "component_sizes": self.component_sizes,
            "c_blocks": [[list(r) for r in c] for c in self.c_blocks],
            "assumptions": self.assumptions,
        }


def _block_structure(m):
    """Split a matrix into minimal-component groups, or None.

    Returns ``(col_groups, c_cols, row_groups, c_rows)`` where rows whose
    support is a proper column subset form the diagonal blocks and full-support
    rows form the bottom ``[B | C]`` band.
    """
    ncols = len(m[0])
    supports = [frozenset(j for j, x in enumerate(row) if x) for row in m]
    full = frozenset(range(ncols))
    groups = []
    for s in supports:
        if s == full or s in groups:
            continue
        if any(s & g for g in groups):
            return None
        groups.append(s)
    if not groups:
        return [full], frozenset(), [frozenset(range(len(m)))], frozenset()
    groups.sort(key=min)
    covered = frozenset().union(*groups)
    c_cols = full - covered
    row_groups = [frozenset(i for i, s in enumerate(supports) if s == g) for g in groups]
    c_rows = frozenset(i for i, s in enumerate(supports) if s == full)
    if c_cols and not c_rows:
        return None
    if c_rows and not c_cols:
        return None
    return groups, c_cols, row_groups, c_rows


def _primitive_exponent(m, limit):
    power = m
    for k in range(1, limit + 1):
        if all(x > 0 for row in power for x in row):
            return k
        power = matmul(m, power)
    return None


def classify(diagram, check_depth=None):
    """Report simplicity, rank, stationarity and class-A block structure."""
    if check_depth is None:
        check_depth = diagram.depth
    if diagram.stationary:
        diagram = diagram.extend(check_depth)
    depth = min(check_depth, diagram.depth)
    sizes = [diagram.size(n) for n in range(1, depth + 1)]
    info = DiagramClass(checked_depth=depth, stationary=diagram.stationary)
    info.rank = max(sizes)
    info.assumptions = [
        "regularity is assumed, not checked",
        "no isolated infinite paths is assumed, not checked",
    ]

    # simplicity: a positive product between checked levels
    if diagram.stationary:
        block = diagram.matrix(diagram.depth - 1)
        d = len(block)
        exp = _primitive_exponent(block, d * d - 2 * d + 2 if d > 1 else 1)
        if exp is not None:
            info.simple = True
            info.simple_witness = ("stationary power", exp)
    else:
        for a in range(1, depth):
            for b in range(a + 1, depth + 1):
                p = product_matrix(diagram, a, b)
                if all(x > 0 for row in p for x in row):
                    info.simple = True
                    info.simple_witness = (a, b)
                    break
            if info.simple:
                break

    # shallow periodicity flag: a chain of single-edge vertices
    if diagram.stationary:
        block = diagram.matrix(diagram.depth - 1)
        single = {v: row.index(1) for v, row in enumerate(block) if sum(row) == 1}
        for start in single:
            seen, v = set(), start
            while v in single and v not in seen:
                seen.add(v)
                v = single[v]
            if v in seen:
                info.periodic_candidate = True
                break
    else:
        lo = max(1, depth // 2)
        alive = {v for v in range(diagram.size(lo)) if diagram.in_degree(lo, v) == 1}
        for n in range(lo + 1, depth + 1):
            alive = {
                v for v in range(diagram.size(n))
                if diagram.in_degree(n, v) == 1 and diagram.in_edges(n, v)[0].source in alive
            }
        info.periodic_candidate = bool(alive) and depth > lo
    if info.rank == 1 and all(diagram.in_degree(n, 0) == 1 for n in range(1, depth + 1)):
        info.periodic_candidate = True

    # class A: one consistent grouping across all checked matrices from level 1
    mats = [diagram.matrix(n) for n in range(1, depth)]
    structs = [_block_structure(m) for m in mats]
    ok = bool(structs) and all(s is not None for s in structs)
    if ok:
        k = len(structs[0][0])
        for s in structs:
            if len(s[0]) != k:
                ok = False
        for prev, nxt in zip(structs, structs[1:]):
            if prev[2] != nxt[0] or prev[3] != nxt[1]:
                ok = False
    if ok:
        info.class_A = True
        info.k = k
        info.component_sizes = [[len(g) for g in s[0]] for s in structs]
        blocks = []
        for m, s in zip(mats, structs):
            rows, cols = sorted(s[3]), sorted(s[1])
            blocks.append(tuple(tuple(m[i][j] for j in cols) for i in rows))
        info.c_blocks = blocks
    return info


def path_count(diagram, m, n, v):
    """``|E(V_m, v)|`` for ``v`` at level ``n``."""
    return sum(product_matrix(diagram, m, n)[v])


def all_paths(diagram, m, n, v):
    """Every path from level ``m`` into ``v`` at level ``n`` (unsorted)."""
    return _paths_between(diagram, m, n, v)


def orders_count(diagram, levels=None):
    """``prod |r^{-1}(v)|!`` over the vertices of the given levels."""
    from math import factorial
    if levels is None:
        levels = range(1, diagram.depth + 1)
    return prod(factorial(diagram.in_degree(n, v)) for n in levels for v in diagram.vertices(n))


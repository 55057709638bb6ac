"""Integer vectors built from a skeleton that survive the incidence maps.

For a maximal vertex ``vt`` of level ``n - 1`` whose image under
``sigma_{n-1}`` is a single ``vb``, the vector at level ``n + k`` counts
paths from ``V_n`` that start in ``W_vt`` minus those that start in
``W'_vb``.  When the order is perfect each entry is -1, 0 or 1 and is fixed
by where the extremal paths into the vertex start.  Both descriptions are
computed and compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .diagram import classify, product_matrix

__all__ = [
    "InfinitesimalError",
    "InfinitesimalVector",
    "epsilon_vector",
    "propagate_check",
    "propagate_family",
    "integer_rank",
    "independence_rank",
    "perron_vector",
    "perron_pairing_check",
    "countable_family",
]


class InfinitesimalError(ValueError):
    pass


@dataclass
class InfinitesimalVector:
    base: int
    vtilde: int
    offset: int
    values: tuple
    from_paths: tuple
    from_extremal: tuple

    @property
    def level(self):
        return self.base + self.offset

    @property
    def consistent(self):
        return self.from_paths == self.from_extremal

    def to_json(self):
        return {
            "base": self.base,
            "vtilde": self.vtilde,
            "offset": self.offset,
            "level": self.level,
            "values": list(self.values),
            "from_paths": list(self.from_paths),
            "consistent": self.consistent,
        }


def _single_image(sigma, n, vt):
    img = sigma.maps[n - 1].get(vt)
    if img is None:
        raise InfinitesimalError(f"{vt} is not a maximal vertex at level {n - 1}")
    if len(img) != 1:
        raise InfinitesimalError(f"sigma_{n - 1}({vt}) = {sorted(img)} is not a single vertex")
    return next(iter(img))


def epsilon_vector(diagram, skeleton, sigma, n, vt, k=1):
    """Vector over ``V_{n+k}`` attached to ``vt`` in ``V~_{n-1}``."""
    if k < 1:
        raise InfinitesimalError("offset must be at least 1")
    if n < 1 or n + k > skeleton.depth:
        raise InfinitesimalError(f"skeleton depth {skeleton.depth} cannot reach level {n + k}")
    vb = _single_image(sigma, n, vt)
    W = skeleton.W(n, vt)
    Wp = skeleton.Wp(n, vb)
    p = product_matrix(diagram, n, n + k)
    from_paths = tuple(sum(row[w] for w in W) - sum(row[w] for w in Wp) for row in p)
    ext = []
    for v in diagram.vertices(n + k):
        top = skeleton.max_chain(n + k, v, n) in W
        bottom = skeleton.min_chain(n + k, v, n) in Wp
        ext.append(int(top) - int(bottom))
    return InfinitesimalVector(n, vt, k, tuple(ext), from_paths, tuple(ext))


@dataclass
class PropagationReport:
    ok: bool
    bad_rows: list = field(default_factory=list)
    levels: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "bad_rows": self.bad_rows, "levels": self.levels}


def propagate_check(matrix, eps, expected):
    """``matrix @ eps == expected`` exactly; offending row indices otherwise."""
    got = [sum(a * b for a, b in zip(row, eps)) for row in matrix]
    bad = [i for i, (g, e) in enumerate(zip(got, expected)) if g != e]
    return PropagationReport(not bad, bad)


def propagate_family(diagram, skeleton, sigma, n, vt, depth=None):
    """Check that the extremal description propagates under every ``F`` up to depth."""
    depth = depth or skeleton.depth
    rep = PropagationReport(True)
    prev = epsilon_vector(diagram, skeleton, sigma, n, vt, 1)
    for k in range(1, depth - n):
        nxt = epsilon_vector(diagram, skeleton, sigma, n, vt, k + 1)
        step = propagate_check(diagram.matrix(n + k), prev.from_extremal, nxt.from_extremal)
        rep.levels.append({"level": n + k, "ok": step.ok, "bad_rows": step.bad_rows})
        if not step.ok:
            rep.ok = False
            rep.bad_rows.extend((n + k, r) for r in step.bad_rows)
        prev = nxt
    return rep


def integer_rank(rows):
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                m[i][j] = (m[i][j] * m[rank][col] - m[i][col] * m[rank][j]) // prev
            m[i][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


def _dependency(vectors):
    """Integer coefficients ``c`` with ``sum c_i v_i = 0``, not all zero, or None."""
    k = len(vectors)
    if k == 0:
        return None
    dim = len(vectors[0])
    # columns are the vectors; reduce the dim x k system to row echelon form
    a = [[Fraction(vectors[j][i]) for j in range(k)] for i in range(dim)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, dim) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(dim):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(k) if c not in pivots]
    if not free:
        return None
    f = free[0]
    coef = [Fraction(0)] * k
    coef[f] = Fraction(1)
    for row, c in enumerate(pivots):
        coef[c] = -a[row][f]
    scale = 1
    for x in coef:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in coef]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return [x // g for x in ints]


def independence_rank(vectors):
    """``(rank, dependency)`` for vectors at a common level.

    ``dependency`` is an integer relation among the inputs or ``None`` when
    they are independent.
    """
    vals = [tuple(v.values) if isinstance(v, InfinitesimalVector) else tuple(v) for v in vectors]
    if len({len(v) for v in vals}) > 1:
        raise InfinitesimalError("vectors live at different levels")
    return integer_rank(vals), _dependency(vals)


def perron_vector(block, tol=1e-12, max_iter=100_000):
    """Normalised positive eigenvector of ``block.T`` by power iteration from uniform."""
    f = np.asarray(block, dtype=float).T
    p = np.full(f.shape[0], 1.0 / f.shape[0])
    lam = 0.0
    for it in range(1, max_iter + 1):
        q = f @ p
        lam = q.sum()
        q /= lam
        if np.max(np.abs(q - p)) < tol:
            return q, lam, it
        p = q
    return p, lam, max_iter


@dataclass
class PairingReport:
    ok: bool
    pairing: float
    eigenvalue: float
    iterations: int
    perron: list
    reason: str = ""

    def to_json(self):
        return {"ok": self.ok, "pairing": self.pairing, "eigenvalue": self.eigenvalue,
                "iterations": self.iterations, "perron": self.perron, "reason": self.reason}


def perron_pairing_check(diagram, eps, tol=1e-9, power_tol=1e-12):
    """``|<p, eps>| <= tol`` for the Perron vector ``p`` of a stationary simple diagram."""
    if not diagram.stationary:
        raise InfinitesimalError("pairing check needs a stationary diagram")
    info = classify(diagram, diagram.depth + 2)
    if not info.simple:
        raise InfinitesimalError("pairing check needs a primitive repeating block")
    block = diagram.matrix(diagram.depth - 1)
    values = eps.values if isinstance(eps, InfinitesimalVector) else eps
    p, lam, it = perron_vector(block, power_tol)
    pairing = float(np.dot(p, np.asarray(values, dtype=float)))
    return PairingReport(abs(pairing) <= tol, pairing, float(lam), it, p.tolist())


def countable_family(diagram, skeleton, sigma, chains, level=None):
    """Vectors for several maximal chains, lifted to one common level.

    ``chains`` lists ``(top_level, vertex)`` pairs naming the maximal chain
    through ``vertex``.  Each chain gets the smallest base level whose
    chain vertex has a single image, and all vectors are then read at
    ``level`` (by default the deepest base plus one).
    """
    bases = []
    for top, v in chains:
        base = None
        for n in range(2, top + 1):
            vt = skeleton.max_chain(top, v, n - 1)
            if len(sigma.maps[n - 1].get(vt, ())) == 1:
                base = n
                break
        if base is None:
            raise InfinitesimalError(f"chain through {v} at level {top} never has a single image")
        bases.append((base, skeleton.max_chain(top, v, base - 1)))
    common = level or max(b for b, _ in bases) + 1
    vecs = [epsilon_vector(diagram, skeleton, sigma, b, vt, common - b) for b, vt in bases]
    rank, dep = independence_rank(vecs)
    return vecs, {"level": common, "rank": rank, "dependency": dep,
                  "consistent": all(v.consistent for v in vecs)}

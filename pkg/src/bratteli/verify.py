"""Perfectness verdicts, the brute-force census and the class-A obstruction.

For a stationary order only three things matter per vertex: the first
letter, the last letter and the set of adjacent pairs of its word.  Writing
``mu(v)`` for the last letter and ``nu(v)`` for the first, the pairs seen in
the language at any level are the closure of the one-step pairs under
``(x, y) -> (mu x, nu y)``.  The order is perfect exactly when the periodic
points of ``mu`` and ``nu`` have the same size and the closure, restricted to
them, is the graph of a bijection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial, prod

from .diagram import BratteliDiagram, classify, matmul
from .hgraph import build_graph, connectivity, crossing_numbers
from .kernels import iter_words, word_signatures
from .ordering import language_pairs
from .skeleton import Correspondence, skeleton_from_order, stationary_skeleton
from .synth import SynthesisError, solve_decomposition

__all__ = [
    "PERFECT",
    "NOT_PERFECT",
    "INCONCLUSIVE",
    "PerfectVerdict",
    "FollowReport",
    "BudgetExceeded",
    "Census",
    "ObstructionVerdict",
    "periodic_points",
    "pair_closure",
    "stationary_verdict",
    "words_verdict",
    "check_words_follow_graph",
    "check_word_follows_graph",
    "check_perfect_finite_rank",
    "brute_force_orders",
    "necessity_report",
    "class_A_obstruction",
    "power_maps",
]

PERFECT = "PERFECT_UP_TO_DEPTH"
NOT_PERFECT = "NOT_PERFECT"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class PerfectVerdict:
    status: str
    horizon: int | None = None
    k: int | None = None
    k_prime: int | None = None
    bijection: dict | None = None
    witness: str | None = None
    method: str = "stationary"

    @property
    def perfect(self):
        return self.status == PERFECT

    def to_json(self, names=None):
        if callable(names):
            name = names
        else:
            name = (lambda v: names[v]) if names else (lambda v: v)
        out = {"status": self.status, "method": self.method, "horizon": self.horizon,
               "k": self.k, "k_prime": self.k_prime}
        if self.bijection is not None:
            out["bijection"] = {str(name(a)): name(b) for a, b in sorted(self.bijection.items())}
        if self.witness:
            out["witness"] = self.witness
        return out


def periodic_points(f):
    """Periodic points of a self-map given as a tuple."""
    pts = set(range(len(f)))
    for _ in range(len(f)):
        pts = {f[x] for x in pts}
    return frozenset(pts)


def pair_closure(pairs, mu, nu):
    seen = set(pairs)
    todo = list(seen)
    while todo:
        x, y = todo.pop()
        nxt = (mu[x], nu[y])
        if nxt not in seen:
            seen.add(nxt)
            todo.append(nxt)
    return frozenset(seen)


def stationary_verdict(mu, nu, pairs, name=str):
    """Verdict for a stationary order from its extremal letters and one-step pairs."""
    pm, pn = periodic_points(mu), periodic_points(nu)
    v = PerfectVerdict(NOT_PERFECT, k=len(pm), k_prime=len(pn))
    if len(pm) != len(pn):
        v.witness = f"{len(pm)} maximal but {len(pn)} minimal paths"
        return v
    rel = sorted((x, y) for x, y in pair_closure(pairs, mu, nu) if x in pm and y in pn)
    fwd, back = {}, {}
    for x, y in rel:
        if x in fwd:
            v.witness = f"maximal {name(x)} is followed by both {name(fwd[x])} and {name(y)}"
            return v
        if y in back:
            v.witness = f"minimal {name(y)} follows both {name(back[y])} and {name(x)}"
            return v
        fwd[x], back[y] = y, x
    if len(fwd) != len(pm):
        x = min(pm - set(fwd))
        v.witness = f"maximal {name(x)} is never followed by a minimal vertex"
        return v
    v.status = PERFECT
    v.bijection = fwd
    return v


def words_verdict(words, name=str):
    """Stationary verdict straight from the block words (tuples of letters)."""
    mu = tuple(w[-1] for w in words)
    nu = tuple(w[0] for w in words)
    pairs = {p for w in words for p in zip(w, w[1:])}
    return stationary_verdict(mu, nu, pairs, name)


@dataclass
class FollowReport:
    ok: bool
    level: int
    horizon: int
    witness: str | None = None
    checked_pairs: int = 0

    def to_json(self):
        return {"ok": self.ok, "level": self.level, "horizon": self.horizon,
                "witness": self.witness, "checked_pairs": self.checked_pairs}


def _first_stray_pair(skeleton, sigma, n, pairs):
    img = sigma.maps[n - 1]
    for x, y in pairs:
        if skeleton.min_source(n, y) not in img.get(skeleton.max_source(n, x), ()):
            return x, y
    return None


def check_words_follow_graph(diagram, order, skeleton, sigma, n, horizon):
    """Every two-letter factor at level ``n`` must be an edge between cells."""
    if order.stationary and order.depth < horizon:
        order = order.extend(horizon)
    pairs = sorted(language_pairs(order, n, horizon))
    bad = _first_stray_pair(skeleton, sigma, n, pairs)
    if bad:
        return FollowReport(False, n, horizon, diagram.name(n, bad[0]) + diagram.name(n, bad[1]), len(pairs))
    return FollowReport(True, n, horizon, None, len(pairs))


def check_word_follows_graph(diagram, skeleton, sigma, n, letters):
    """Same test for one word over ``V_n`` (adjacent letters only)."""
    pairs = list(zip(letters, letters[1:]))
    bad = _first_stray_pair(skeleton, sigma, n, pairs)
    if bad:
        return FollowReport(False, n, n + 1, diagram.name(n, bad[0]) + diagram.name(n, bad[1]), len(pairs))
    return FollowReport(True, n, n + 1, None, len(pairs))


def _finite_verdict(order, horizon):
    ext = skeleton_from_order(order, horizon)
    o, sk = ext.order, ext.skeleton
    top = o.depth
    # the top level holds every vertex, so verticality is read below it
    for n in range(2, top):
        for sets, src in ((sk.max_vertices, sk.max_source), (sk.min_vertices, sk.min_source)):
            if sets[n] != sets[n - 1] or any(src(n, v) != v for v in sets[n]):
                return PerfectVerdict(INCONCLUSIVE, horizon=horizon, method="finite",
                                      witness=f"extremal paths not vertical at level {n} "
                                              f"after telescoping to levels {ext.levels}")
    k, kp = len(sk.max_vertices[top - 1]), len(sk.min_vertices[top - 1])
    v = PerfectVerdict(NOT_PERFECT, horizon=horizon, k=k, k_prime=kp, method="finite")
    if k != kp:
        v.witness = f"{k} maximal but {kp} minimal paths"
        return v
    name = lambda x: o.diagram.name(1, x)
    found = None
    for n in range(1, max(1, top // 2) + 1):
        pairs = language_pairs(o, n, top)
        fwd, back = {}, {}
        for x, y in sorted(pairs):
            if x not in sk.max_vertices[n] or y not in sk.min_vertices[n]:
                continue
            if x in fwd:
                v.witness = f"level {n}: maximal {name(x)} followed by {name(fwd[x])} and {name(y)}"
                return v
            if y in back:
                v.witness = f"level {n}: minimal {name(y)} follows {name(back[y])} and {name(x)}"
                return v
            fwd[x], back[y] = y, x
        if len(fwd) != k:
            return PerfectVerdict(INCONCLUSIVE, horizon=horizon, k=k, k_prime=kp, method="finite",
                                  witness=f"level {n}: some maximal vertex has no follower yet")
        found = fwd
    v.status = PERFECT
    v.bijection = found
    return v


def check_perfect_finite_rank(order, horizon=None):
    """Perfectness verdict.

    Stationary orders get an exact answer from their repeating level.  Other
    orders are telescoped until extremal paths are vertical, then checked on
    the language up to ``horizon``.
    """
    if order.stationary:
        d = order.diagram
        top = len(order.level_specs())
        words = [order.letters(top, v) for v in d.vertices(top)]
        v = words_verdict(words, lambda x: d.name(top, x))
        v.horizon = horizon
        return v
    return _finite_verdict(order, horizon or order.depth)


class BudgetExceeded(ValueError):
    def __init__(self, required, budget):
        super().__init__(f"census needs {required} orders, budget is {budget}")
        self.required = required
        self.budget = budget


def power_maps(mu, nu, t):
    m, n = list(range(len(mu))), list(range(len(nu)))
    for _ in range(t):
        m = [mu[x] for x in m]
        n = [nu[x] for x in n]
    return tuple(m), tuple(n)


def _telescoping_power(mu, nu):
    """Smallest ``t >= 1`` with both ``mu^t`` and ``nu^t`` landing in periodic points."""
    pm, pn = periodic_points(mu), periodic_points(nu)
    for t in range(1, len(mu) + 1):
        a, b = power_maps(mu, nu, t)
        if set(a) <= pm and set(b) <= pn:
            return t
    return len(mu)


def _mat_power(m, t):
    out = m
    for _ in range(t - 1):
        out = matmul(m, out)
    return out


def necessity_report(block, mu, nu, sigma):
    """Balance solvability and positive strong connectivity of a stationary skeleton.

    The skeleton is first telescoped so that every extremal edge starts at a
    periodic point.  Returns a dict with per-vertex results.
    """
    t = _telescoping_power(mu, nu)
    mt, nt = power_maps(mu, nu, t)
    ft = _mat_power(block, t)
    d = len(block)
    diag = BratteliDiagram([[[1]] * d, ft], stationary=True)
    pm, pn = periodic_points(mu), periodic_points(nu)
    sk = stationary_skeleton(diag, mt, nt, pm, pn, 3)
    corr = Correspondence.constant({x: {y} for x, y in sigma.items()}, range(1, 3))
    g = build_graph(sk.diagram, sk, corr, 2)
    out = {"power": t, "balance": True, "positively_strong": True, "failures": []}
    for u in range(d):
        cr = crossing_numbers(sk.diagram, sk, g, u)
        if not connectivity(g, cr).positively_strong:
            out["positively_strong"] = False
            out["failures"].append({"u": u, "kind": "positively_strong"})
        try:
            solve_decomposition(sk.diagram, sk, corr, 2, u)
        except SynthesisError:
            out["balance"] = False
            out["failures"].append({"u": u, "kind": "balance"})
    return out


@dataclass
class Census:
    """Stationary census grouped by per-vertex word signature."""

    block: tuple
    total_orders: int
    word_tuples: int
    signatures: list
    combos: list = field(default_factory=list)

    @property
    def perfect_tuples(self):
        return sum(c["multiplicity"] for c in self.combos if c["verdict"].perfect)

    def perfect_skeletons(self):
        """``{(mu, nu, sigma_items): tuple_count}`` over perfect orders."""
        out = {}
        for c in self.combos:
            v = c["verdict"]
            if v.perfect:
                key = (c["mu"], c["nu"], tuple(sorted(v.bijection.items())))
                out[key] = out.get(key, 0) + c["multiplicity"]
        return out

    def iter_orders(self):
        """Every distinct word tuple with its verdict (expands words lazily)."""
        cache = {}
        for words in itertools.product(*(list(iter_words(row)) for row in self.block)):
            sig = tuple((w[0], w[-1], frozenset(zip(w, w[1:]))) for w in words)
            if sig not in cache:
                cache[sig] = words_verdict(words)
            yield words, cache[sig]

    def to_json(self):
        skel = self.perfect_skeletons()
        return {
            "block": [list(r) for r in self.block],
            "total_orders": self.total_orders,
            "word_tuples": self.word_tuples,
            "perfect_word_tuples": self.perfect_tuples,
            "perfect_skeletons": [
                {"mu": list(m), "nu": list(n), "sigma": {str(a): b for a, b in s}, "word_tuples": c}
                for (m, n, s), c in sorted(skel.items())
            ],
        }


def _mask_pairs(mask, d):
    return {(b // d, b % d) for b in range(d * d) if mask >> b & 1}


def brute_force_orders(diagram, mode="stationary", budget=100_000, depth=None):
    """Enumerate orders and classify each.

    ``stationary`` mode reuses one order of the repeating block at every level
    and groups orders by signature.  ``per_level`` mode enumerates every
    level of a finite diagram independently and returns a list of
    ``(levels, verdict)``.
    """
    if mode == "stationary":
        if not diagram.stationary:
            raise ValueError("stationary census needs a stationary diagram")
        block = diagram.matrix(diagram.depth - 1)
        d = len(block)
        total = prod(factorial(sum(r)) for r in block)
        if total > budget:
            raise BudgetExceeded(total, budget)
        sigs = [word_signatures(list(r)) for r in block]
        tuples = prod(sum(s.values()) for s in sigs)
        census = Census(tuple(tuple(r) for r in block), total, tuples, sigs)
        for combo in itertools.product(*(sorted(s.items()) for s in sigs)):
            mu = tuple(c[0][1] for c in combo)
            nu = tuple(c[0][0] for c in combo)
            pairs = set()
            for c in combo:
                pairs |= _mask_pairs(c[0][2], d)
            census.combos.append({
                "mu": mu, "nu": nu,
                "masks": tuple(c[0][2] for c in combo),
                "multiplicity": prod(c[1] for c in combo),
                "verdict": stationary_verdict(mu, nu, pairs),
            })
        return census
    if mode == "per_level":
        from .ordering import order_from_words
        if depth is not None:
            diagram = diagram.truncate(depth)
        total = prod(factorial(diagram.in_degree(n, v))
                     for n in range(1, diagram.depth + 1) for v in diagram.vertices(n))
        if total > budget:
            raise BudgetExceeded(total, budget)
        choices = [list(iter_words(list(diagram.matrix(n - 1)[v])))
                   for n in range(1, diagram.depth + 1) for v in diagram.vertices(n)]
        out = []
        for pick in itertools.product(*choices):
            it = iter(pick)
            levels = [[next(it) for _ in diagram.vertices(n)] for n in range(1, diagram.depth + 1)]
            order = order_from_words(diagram, levels)
            out.append((levels, check_perfect_finite_rank(order, diagram.depth)))
        return out
    raise ValueError(f"unknown census mode {mode!r}")


@dataclass
class ObstructionVerdict:
    status: str
    k: int = 0
    d: int = 0
    reason: str = ""

    def to_json(self):
        return {"status": self.status, "k": self.k, "d": self.d, "reason": self.reason}


def class_A_obstruction(diagram, check_depth=None):
    """Block-structure test ruling out perfect orders on class-A diagrams."""
    info = classify(diagram, check_depth)
    if not info.class_A or not info.c_blocks or not info.c_blocks[0]:
        return ObstructionVerdict("NOT_APPLICABLE", reason="not class A with a nonempty C block")
    k = info.k
    d = len(info.c_blocks[-1])
    if k < 2 or not 1 <= d <= k - 1:
        return ObstructionVerdict("NOT_APPLICABLE", k, d, f"needs 1 <= d <= k-1, got k={k}, d={d}")
    if k > 2:
        return ObstructionVerdict("NO_PERFECT_ORDER", k, d, "more than two minimal components")
    tail = info.c_blocks[len(info.c_blocks) // 2:]
    if all(c == ((1,),) for c in tail):
        return ObstructionVerdict("NOT_BLOCKED", k, d, "two minimal components and C = (1) on the checked tail")
    bad = next(c for c in tail if c != ((1,),))
    return ObstructionVerdict("NO_PERFECT_ORDER", k, d, f"two minimal components but C = {[list(r) for r in bad]}")

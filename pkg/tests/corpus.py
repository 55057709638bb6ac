"""Seeded corpus of small stationary diagrams shared by the property tests."""

import itertools
import random
from math import factorial, prod

from bratteli.diagram import build_diagram
from bratteli.synth import SynthesisError, synthesize_stationary
from bratteli.verify import periodic_points, words_verdict

BUDGET = 100_000


def primitive(block):
    d = len(block)
    m = [list(r) for r in block]
    for _ in range(d * d):
        if all(x > 0 for r in m for x in r):
            return True
        m = [[sum(m[i][k] * block[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
    return all(x > 0 for r in m for x in r)


def stationary(block):
    d = len(block)
    return build_diagram(matrices=[[[1]] * d, [list(r) for r in block]], stationary=True)


def random_block(rng, max_d=4, max_entry=3):
    while True:
        d = rng.randint(1, max_d)
        block = tuple(tuple(rng.randint(0, max_entry) for _ in range(d)) for _ in range(d))
        if any(sum(r) < 2 for r in block):
            continue
        if prod(factorial(sum(r)) for r in block) > BUDGET:
            continue
        if primitive(block):
            return block


def corpus(size=60, seed=20240611):
    rng = random.Random(seed)
    seen = []
    while len(seen) < size:
        b = random_block(rng)
        if b not in seen:
            seen.append(b)
    return seen


def _idempotent_maps(d):
    """Self-maps that restrict to a permutation of their image."""
    for f in itertools.product(range(d), repeat=d):
        img = set(f)
        if {f[x] for x in img} == img:
            yield f


def synthesizable_skeletons(block):
    """``{(mu, nu, sigma_items)}`` for which synthesis succeeds and verifies.

    Only skeletons whose extremal vertex sets are the periodic points are
    enumerated, matching a diagram telescoped far enough for the extremal
    paths to be vertical.
    """
    d = len(block)
    diagram = stationary(block)
    maps = list(_idempotent_maps(d))
    out = set()
    for mu in maps:
        if any(block[v][mu[v]] == 0 for v in range(d)):
            continue
        pm = sorted(set(mu))
        for nu in maps:
            if any(block[v][nu[v]] == 0 or (mu[v] == nu[v] and block[v][mu[v]] < 2) for v in range(d)):
                continue
            pn = sorted(set(nu))
            if len(pm) != len(pn):
                continue
            for perm in itertools.permutations(pn):
                sigma = dict(zip(pm, perm))
                try:
                    order, words = synthesize_stationary(
                        diagram, mu, nu, pm, pn, {a: {b} for a, b in sigma.items()})
                except (SynthesisError, ValueError):
                    continue
                letters = [words[u].letters for u in range(d)]
                v = words_verdict(letters)
                assert v.perfect and v.bijection == sigma, (block, mu, nu, sigma, letters)
                out.add((mu, nu, tuple(sorted(sigma.items()))))
    return out


def well_telescoped(mu, nu):
    return set(mu) == periodic_points(mu) and set(nu) == periodic_points(nu)


def compatible_skeletons(block):
    """Well-telescoped ``(mu, nu, sigma)`` with sigma a bijection commuting with the maps."""
    d = len(block)
    maps = list(_idempotent_maps(d))
    for mu in maps:
        if any(block[v][mu[v]] == 0 for v in range(d)):
            continue
        pm = sorted(set(mu))
        for nu in maps:
            if any(block[v][nu[v]] == 0 or (mu[v] == nu[v] and block[v][mu[v]] < 2) for v in range(d)):
                continue
            pn = sorted(set(nu))
            if len(pm) != len(pn):
                continue
            for perm in itertools.permutations(pn):
                sigma = dict(zip(pm, perm))
                if all(sigma[mu[x]] == nu[sigma[x]] for x in pm):
                    yield mu, nu, sigma

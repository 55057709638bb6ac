"""Bundled example documents.

Each fixture is a JSON bundle (diagram plus optional order, skeleton,
target vertex and decomposition).  The JSON files are generated from the
builders below; ``python -m bratteli.fixtures`` rewrites them.
"""

from __future__ import annotations

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

__all__ = ["names", "load_raw", "load", "build_all", "write_all"]


def _names_per_level(depth, labels):
    return [["v0"]] + [labels(n) for n in range(1, depth + 1)]


def _stationary_doc(matrix, labels, **extra):
    d = len(matrix)
    doc = {
        "version": 1,
        "matrices": [[[1]] * d, [list(r) for r in matrix]],
        "stationary": True,
        "names": [["v0"], list(labels), list(labels)],
    }
    doc.update(extra)
    return doc


def _square(m):
    n = len(m)
    return [[sum(m[i][k] * m[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


THREE_CYCLE = [[2, 1, 1, 1], [1, 2, 1, 1], [1, 1, 2, 1], [1, 1, 1, 2]]
ABCD = ["a", "b", "c", "d"]


def rotating_triple():
    """Stationary order on the squared four-vertex matrix with three extremal paths."""
    a, b, c, d = range(4)
    words = [
        [a, d, b, c] * 6 + [a],
        [b, c, a, d] * 6 + [b],
        [c, a, d, b] * 6 + [c],
        [b, c, a] + [d] * 7 + [b, c, a] * 5,
    ]
    return {
        "name": "rotating_triple",
        "description": "order on F^2 with three maximal and three minimal paths, cycled a->b->c->a",
        "diagram": _stationary_doc(_square(THREE_CYCLE), ABCD),
        "order": {"stationary": True, "words": [[[0]] * 4, words]},
        "skeleton": {
            "stationary": True,
            "max_sources": [a, b, c, a],
            "min_sources": [a, b, c, b],
            "max_vertices": [a, b, c],
            "min_vertices": [a, b, c],
            "sigma": {"0": [b], "1": [c], "2": [a]},
            "depth": 5,
        },
        "expect": {"verdict": "PERFECT_UP_TO_DEPTH", "bijection": {"a": "b", "b": "c", "c": "a"}},
    }


def rotating_triple_unsquared():
    """The same skeleton on the unsquared matrix: the vertex d cannot be ordered."""
    doc = rotating_triple()
    doc.pop("order")
    doc.update({
        "name": "rotating_triple_unsquared",
        "description": "three-cycle skeleton on F itself; cells miss positive strong connectivity at d",
        "diagram": _stationary_doc(THREE_CYCLE, ABCD),
        "target": {"level": 2, "vertex": 3},
        "expect": {"positively_strong": False, "witness": "no path from [c,c] to [b,a]"},
    })
    return doc


def _staircase_matrices(depth, special):
    mats = [[[2]]]
    for n in range(1, depth):
        m = [[2] * n for _ in range(n + 1)]
        for (level, u), row in special.items():
            if level == n:
                m[u] = list(row)
        mats.append(m)
    return mats


def _vn(n):
    return [f"v{i + 1}" for i in range(n)]


def _level_doc(depth, max_src, min_src, vertices, sigma):
    levels = [{"level": 0, "max_vertices": [0], "min_vertices": [0]}]
    for n in range(1, depth + 1):
        entry = {"level": n, "max_vertices": vertices(n), "min_vertices": vertices(n)}
        if n >= 2:
            entry["max_sources"] = max_src(n)
            entry["min_sources"] = min_src(n)
        entry["sigma"] = {str(k): sorted(v) for k, v in sigma(n).items()}
        levels.append(entry)
    return {"version": 1, "form": "sources", "levels": levels}


def staircase(depth=6):
    """Growing levels ``V_n = {v1..vn}``; the new vertex hangs off the previous top."""
    mats = _staircase_matrices(depth, {(3, 1): (1, 2, 1)})
    return {
        "name": "staircase",
        "description": "countably many extremal paths, sigma shifts each path to the next",
        "diagram": {"version": 1, "matrices": mats, "names": _names_per_level(depth, _vn)},
        "skeleton": _level_doc(
            depth,
            lambda n: [v if v < n - 1 else n - 2 for v in range(n)],
            lambda n: [v if v < n - 1 else 0 for v in range(n)],
            lambda n: list(range(n)),
            lambda n: {i: [(i + 1) % n] for i in range(n)},
        ),
        "target": {"level": 3, "vertex": 1},
        "expect": {"word": ["v2", "v3", "v1", "v2"]},
    }


def forked_staircase(depth=6):
    """Staircase variant whose first maximal vertex is sent to two minimal vertices."""
    mats = _staircase_matrices(depth, {(4, 0): (4, 2, 2, 3)})

    def sigma(n):
        if n >= 3:
            return {i: ([1, 2] if i == 0 else [(i + 1) % n]) for i in range(n)}
        return {i: [(i + 1) % n] for i in range(n)}

    return {
        "name": "forked_staircase",
        "description": "set-valued sigma at the first vertex; exercises the loop rule",
        "diagram": {"version": 1, "matrices": mats, "names": _names_per_level(depth, _vn)},
        "skeleton": _level_doc(
            depth,
            lambda n: [0, 0] + [v - 1 for v in range(2, n)],
            lambda n: [0, 1 if n >= 3 else 0] + [v - 1 for v in range(2, n)],
            lambda n: list(range(n)),
            sigma,
        ),
        "target": {"level": 4, "vertex": 0},
        "decomposition": {"level": 4, "u": 0, "counts": [
            [0, 1, 2], [0, 2, 1], [1, 1, 2], [1, 2, 0], [2, 2, 2], [3, 0, 3]]},
        "expect": {"words": [
            ["v1", "v2", "v2", "v3", "v4", "v1", "v3", "v4", "v1", "v4", "v1"],
            ["v1", "v2", "v2", "v3", "v4", "v1", "v4", "v1", "v3", "v4", "v1"],
        ]},
    }


def binary_odometer(depth=4):
    """``2^n`` vertices labelled by binary strings; sigma adds one with carry."""
    mats = [[[2], [2]]]
    for n in range(1, depth):
        mats.append([[2] * 2 ** n for _ in range(2 ** (n + 1))])

    def label(n):
        return ["".join(str(j >> i & 1) for i in range(n)) for j in range(2 ** n)]

    return {
        "name": "binary_odometer",
        "description": "uncountably many extremal paths; sigma is the odometer",
        "diagram": {"version": 1, "matrices": mats, "names": _names_per_level(depth, label)},
        "skeleton": _level_doc(
            depth,
            lambda n: [j % 2 ** (n - 1) for j in range(2 ** n)],
            lambda n: [j % 2 ** (n - 1) for j in range(2 ** n)],
            lambda n: list(range(2 ** n)),
            lambda n: {j: [(j + 1) % 2 ** n] for j in range(2 ** n)},
        ),
    }


def two_path_aligned():
    """Two extremal paths, sigma the identity; one infinitesimal up to sign."""
    a, b, c, d = range(4)
    return {
        "name": "two_path_aligned",
        "description": "cells a in [a,a], b in [b,b], c in [a,b], d in [b,a]; sigma = id",
        "diagram": _stationary_doc(THREE_CYCLE, ABCD),
        "skeleton": {
            "stationary": True,
            "max_sources": [a, b, b, a],
            "min_sources": [a, b, a, b],
            "max_vertices": [a, b],
            "min_vertices": [a, b],
            "sigma": {"0": [a], "1": [b]},
            "depth": 5,
        },
        "expect": {"epsilon": {"a": [0, 0, -1, 1], "b": [0, 0, 1, -1]}},
    }


def two_path_crossed():
    """The other two-path graph on the same matrix: sigma swaps a and b."""
    a, b, c, d = range(4)
    return {
        "name": "two_path_crossed",
        "description": "cells a in [a,a], b in [b,b], c in [b,a], d in [a,b]; sigma swaps",
        "diagram": _stationary_doc(THREE_CYCLE, ABCD),
        "skeleton": {
            "stationary": True,
            "max_sources": [a, b, a, b],
            "min_sources": [a, b, b, a],
            "max_vertices": [a, b],
            "min_vertices": [a, b],
            "sigma": {"0": [b], "1": [a]},
            "depth": 5,
        },
        "expect": {"epsilon": {"a": [1, -1, 0, 0], "b": [-1, 1, 0, 0]}},
    }


def _class_a(name, matrix, status, description):
    labels = [chr(ord("a") + i) for i in range(len(matrix))]
    return {
        "name": name,
        "description": description,
        "diagram": _stationary_doc(matrix, labels),
        "expect": {"obstruction": status},
    }


def class_a_three_components():
    return _class_a(
        "class_a_three_components",
        [[2, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 2, 0, 0], [1, 1, 1, 1, 1], [1, 1, 1, 1, 1]],
        "NO_PERFECT_ORDER", "three minimal components and a 2x2 C block")


def class_a_two_components_wide():
    return _class_a(
        "class_a_two_components_wide",
        [[2, 0, 0], [0, 2, 0], [1, 1, 2]],
        "NO_PERFECT_ORDER", "two minimal components, C = (2)")


def class_a_two_components_thin():
    return _class_a(
        "class_a_two_components_thin",
        [[2, 0, 0], [0, 2, 0], [1, 1, 1]],
        "NOT_BLOCKED", "two minimal components, C = (1)")


BUILDERS = {
    f.__name__: f
    for f in (
        rotating_triple, rotating_triple_unsquared, staircase, forked_staircase,
        binary_odometer, two_path_aligned, two_path_crossed, class_a_three_components,
        class_a_two_components_wide, class_a_two_components_thin,
    )
}


def names():
    return sorted(BUILDERS)


def build_all():
    out = {}
    for name, fn in BUILDERS.items():
        doc = {"schema_version": 1}
        doc.update(fn())
        out[name] = doc
    return out


def write_all(directory=HERE):
    for name, doc in build_all().items():
        (Path(directory) / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_raw(name):
    path = HERE / f"{name}.json"
    if path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    if name in BUILDERS:
        return build_all()[name]
    raise KeyError(name)


def load(name, depth=None):
    from ..formats import Bundle
    return Bundle(load_raw(name), depth)

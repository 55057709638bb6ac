"""Reading and writing the JSON documents used by the command line."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .diagram import build_diagram
from .ordering import assign_order, order_from_words
from .skeleton import Correspondence, Skeleton, SkeletonError, stationary_skeleton
from .synth import BalanceDecomposition

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "Bundle",
    "load_bundle",
    "load_skeleton",
    "dump_json",
    "write_atomic",
]


def _sigma_map(raw):
    return {int(k): frozenset(v) for k, v in raw.items()}


def load_skeleton(diagram, data, depth=None):
    """Parse skeleton JSON into ``(skeleton, correspondence or None)``.

    Two shapes are accepted: the per-level form written by
    :meth:`Skeleton.to_json`, and a stationary form giving one set of
    extremal sources, vertex sets and ``sigma`` for every level.
    """
    if data.get("stationary"):
        depth = depth or data.get("depth", max(diagram.depth, 4))
        sk = stationary_skeleton(diagram, data["max_sources"], data["min_sources"],
                                 data["max_vertices"], data["min_vertices"], depth)
        sigma = None
        if "sigma" in data:
            sigma = Correspondence.constant(_sigma_map(data["sigma"]), range(1, depth + 1))
        return sk, sigma
    if "levels" not in data:
        raise SkeletonError("skeleton JSON needs 'levels' or 'stationary'")
    return Skeleton.from_json(diagram, data)


class Bundle:
    """A diagram with whatever optional pieces a document provides."""

    def __init__(self, data, depth=None):
        self.raw = data
        self.name = data.get("name")
        self.diagram = build_diagram(data["diagram"])
        if depth and depth > self.diagram.depth and self.diagram.stationary:
            self.diagram = self.diagram.extend(depth)
        self.order = None
        if "order" in data:
            od = data["order"]
            if "words" in od:
                self.order = order_from_words(self.diagram, od["words"], od.get("stationary", False))
            else:
                self.order = assign_order(self.diagram, od)
        self.skeleton = self.sigma = None
        self.stationary_skeleton = None
        if "skeleton" in data:
            sk = data["skeleton"]
            self.skeleton, self.sigma = load_skeleton(self.diagram, sk, depth)
            if sk.get("stationary"):
                self.stationary_skeleton = sk
        self.target = data.get("target")
        self.decomposition = None
        if "decomposition" in data:
            self.decomposition = BalanceDecomposition.from_json(data["decomposition"])
        self.expect = data.get("expect", {})


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_bundle(path=None, *, diagram=None, order=None, skeleton=None, depth=None):
    """Bundle from a file (or bundled fixture name) with optional piecewise overrides."""
    from . import fixtures

    data = {}
    if path is not None:
        p = Path(path)
        if p.exists():
            data = _read(p)
        elif path in fixtures.names():
            data = fixtures.load_raw(path)
        else:
            raise FileNotFoundError(f"no such file or bundled fixture: {path}")
    data = dict(data)
    if diagram:
        data["diagram"] = _read(diagram)
    if order:
        data["order"] = _read(order)
    if skeleton:
        data["skeleton"] = _read(skeleton)
    if "diagram" not in data:
        raise ValueError("no diagram given")
    return Bundle(data, depth)


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

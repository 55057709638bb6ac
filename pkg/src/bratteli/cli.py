"""Command-line front end.

Every subcommand reads a bundle (a JSON file or the name of a bundled
fixture), optionally overridden piecewise with ``--diagram``, ``--order``
and ``--skeleton``, and prints a pretty JSON report.  With ``--out DIR``
the report and any side files (DOT graphs, walk traces, census lines) are
written atomically into ``DIR`` instead.

Exit status: 0 success, 1 definite negative verdict, 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .diagram import DiagramError, classify, telescope
from .formats import SCHEMA_VERSION, dump_json, load_bundle, write_atomic
from .hgraph import build_graph, connectivity, crossing_numbers, export_dot
from .infinitesimal import (
    InfinitesimalError,
    epsilon_vector,
    independence_rank,
    perron_pairing_check,
    propagate_family,
)
from .ordering import OrderError, default_order, level_language, telescope_order, words_at
from .skeleton import SkeletonError, validate_correspondence
from .synth import (
    Infeasible,
    NotPositivelyConnected,
    Stuck,
    SynthesisError,
    check_balance,
    solve_decomposition,
    synthesize_order,
    synthesize_stationary,
    synthesize_vertex_order,
)
from .verify import (
    INCONCLUSIVE,
    NOT_PERFECT,
    BudgetExceeded,
    brute_force_orders,
    check_perfect_finite_rank,
    check_words_follow_graph,
    class_A_obstruction,
)

OK, NEGATIVE, INCONCLUSIVE_EXIT, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


class Run:
    """Collects the report and side files of one invocation."""

    def __init__(self, args):
        self.args = args
        self.files = {}

    def name(self, diagram, n):
        return lambda v: diagram.name(n, v)

    def side(self, filename, text):
        self.files[filename] = text

    def report(self, command, body):
        out = {"schema_version": SCHEMA_VERSION, "command": command}
        if not self.args.no_timestamp:
            out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        out["input"] = self.args.input
        out.update(body)
        return out


def _bundle(args):
    try:
        return load_bundle(args.input, diagram=args.diagram, order=args.order,
                           skeleton=args.skeleton, depth=args.depth)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    except (DiagramError, OrderError, SkeletonError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


def _need(bundle, *parts):
    for p in parts:
        if getattr(bundle, p) is None:
            raise InputError(f"this command needs {'an' if p[0] in 'aeiou' else 'a'} {p}")


def _targets(args, bundle, default_level):
    """``(level, u)`` pairs selected by ``--level`` / ``--vertex`` or the bundle target."""
    level = args.level
    vertex = args.vertex
    if level is None and bundle.target:
        level = bundle.target["level"]
        if vertex is None:
            vertex = bundle.target["vertex"]
    if level is None:
        level = default_level
    if level < 1 or level >= bundle.skeleton.depth:
        raise InputError(f"level must lie in 1..{bundle.skeleton.depth - 1}")
    us = list(bundle.diagram.vertices(level + 1)) if vertex is None else [vertex]
    return level, us


# -- subcommands -------------------------------------------------------------


def cmd_validate(run, b):
    d = b.diagram
    body = {"diagram": {"depth": d.depth, "stationary": d.stationary,
                        "vertex_counts": list(d.vertex_counts),
                        "class": classify(d).to_json()}}
    status = OK
    if b.order is not None:
        body["order"] = {"valid": True, "depth": b.order.depth, "stationary": b.order.stationary}
    if b.skeleton is not None:
        msgs = b.skeleton.validate()
        body["skeleton"] = {"valid": not msgs, "depth": b.skeleton.depth, "messages": msgs}
        if msgs:
            status = NEGATIVE
        if b.sigma is not None:
            rep = validate_correspondence(d, b.skeleton, b.sigma)
            body["correspondence"] = rep.to_json()
            if not rep.ok:
                status = NEGATIVE
    return status, body


def cmd_telescope(run, b):
    d = b.diagram
    if run.args.levels:
        levels = [int(x) for x in run.args.levels.split(",")]
    else:
        top = run.args.depth or max(d.depth, 4)
        levels = list(range(0, top + 1, 2))
    body = {"levels": levels}
    if b.order is not None:
        t = telescope_order(b.order, levels)
        body["diagram"] = t.diagram.to_json()
        body["order"] = t.to_json()
    else:
        body["diagram"] = telescope(d, levels).to_json()
    return OK, body


def _order(b):
    return b.order if b.order is not None else default_order(b.diagram)


def cmd_words(run, b):
    order = _order(b)
    n = run.args.to if run.args.to is not None else (run.args.depth or min(order.depth, 3))
    m = run.args.frm if run.args.frm is not None else 0
    name = run.name(order.diagram if n <= order.depth else order.extend(n).diagram, m)
    words = words_at(order, n, m)
    return OK, {"from": m, "to": n, "words": [
        {"vertex": v, "word": [name(x) for x in w.letters]} for v, w in enumerate(words)]}


def cmd_language(run, b):
    order = _order(b)
    n = run.args.level if run.args.level is not None else 1
    horizon = run.args.horizon or max(order.depth, n + 3)
    if order.stationary and order.depth < horizon:
        order = order.extend(horizon)
    lang = level_language(order, n, horizon)
    name = run.name(order.diagram, n)
    body = {"level": n, "horizon": horizon,
            "pairs": [[name(x), name(y)] for x, y in sorted(lang.pairs)]}
    if b.skeleton is not None and b.sigma is not None and n >= 2:
        body["follows_graph"] = check_words_follow_graph(
            order.diagram, order, b.skeleton, b.sigma, n, horizon).to_json()
    return OK, body


def cmd_hgraph(run, b):
    _need(b, "skeleton", "sigma")
    n, us = _targets(run.args, b, 2)
    g = build_graph(b.diagram, b.skeleton, b.sigma, n)
    per_u = []
    status = OK
    for u in us:
        cr = crossing_numbers(b.diagram, b.skeleton, g, u)
        con = connectivity(g, cr)
        per_u.append({"u": u, "name": b.diagram.name(n + 1, u),
                      "crossings": {g.label(k): c for k, c in sorted(cr.counts.items())},
                      "terminal": g.label(cr.terminal),
                      "connectivity": con.to_json(g)})
        if not con.positively_strong:
            status = NEGATIVE
        if run.args.dot:
            run.side(f"hgraph_L{n}_u{u}.dot", export_dot(g, cr, f"H{n}_u{u}"))
    if run.args.dot and not us:
        run.side(f"hgraph_L{n}.dot", export_dot(g))
    return status, {"level": n, "graph": g.to_json(), "vertices": per_u}


def cmd_balance(run, b):
    _need(b, "skeleton", "sigma")
    n, us = _targets(run.args, b, 2)
    out = []
    status = OK
    for u in us:
        dec = b.decomposition if b.decomposition and (b.decomposition.level, b.decomposition.u) == (n, u) \
            else None
        entry = {"u": u}
        try:
            if dec is None:
                dec = solve_decomposition(b.diagram, b.skeleton, b.sigma, n, u)
                entry["source"] = "solved"
            else:
                entry["source"] = "given"
            rep = check_balance(b.diagram, b.skeleton, b.sigma, n, u, dec)
            entry.update({"decomposition": dec.to_json(), "report": rep.to_json()})
            if not rep.ok:
                status = NEGATIVE
        except Infeasible as exc:
            entry.update({"status": "INFEASIBLE", "message": str(exc), "failures": exc.failures})
            status = NEGATIVE
        out.append(entry)
    return status, {"level": n, "vertices": out}


def _synth_failure(exc):
    body = {"status": type(exc).__name__, "message": str(exc), "failures": exc.failures}
    if isinstance(exc, Stuck):
        return INCONCLUSIVE_EXIT, body
    return NEGATIVE, body


def cmd_synthesize(run, b):
    _need(b, "skeleton", "sigma")
    args = run.args
    try:
        if args.level is not None or args.vertex is not None or (b.target and not args.all):
            n, us = _targets(args, b, 2)
            g = build_graph(b.diagram, b.skeleton, b.sigma, n)
            words = []
            for u in us:
                dec = b.decomposition if b.decomposition and \
                    (b.decomposition.level, b.decomposition.u) == (n, u) else None
                w = synthesize_vertex_order(b.diagram, b.skeleton, b.sigma, n, u, dec, g)
                words.append(w.to_json(b.diagram))
                run.side(f"trace_L{n}_u{u}.json", dump_json(w.trace))
            return OK, {"status": "OK", "level": n, "words": words}
        if b.stationary_skeleton is not None:
            s = b.stationary_skeleton
            sigma = {int(k): set(v) for k, v in s["sigma"].items()}
            order, words = synthesize_stationary(b.diagram, s["max_sources"], s["min_sources"],
                                                 s["max_vertices"], s["min_vertices"], sigma)
            for u, w in words.items():
                run.side(f"trace_L2_u{u}.json", dump_json(w.trace))
            return OK, {"status": "OK", "order": order.to_json(),
                        "words": [w.to_json(order.diagram) for w in words.values()]}
        decs = {}
        if b.decomposition is not None:
            decs[(b.decomposition.level, b.decomposition.u)] = b.decomposition
        order, words = synthesize_order(b.diagram, b.skeleton, b.sigma, args.depth, decs)
        for (n, u), w in sorted(words.items()):
            run.side(f"trace_L{n}_u{u}.json", dump_json(w.trace))
        return OK, {"status": "OK", "order": order.to_json(),
                    "words": [w.to_json(b.diagram) for _, w in sorted(words.items())]}
    except SynthesisError as exc:
        return _synth_failure(exc)


def cmd_verify(run, b):
    _need(b, "order")
    v = check_perfect_finite_rank(b.order, run.args.horizon)
    body = {"verdict": v.to_json(run.name(b.order.diagram, max(b.order.depth, 1)))}
    if v.status == NOT_PERFECT:
        return NEGATIVE, body
    if v.status == INCONCLUSIVE:
        return INCONCLUSIVE_EXIT, body
    return OK, body


def cmd_census(run, b):
    d = b.diagram
    budget = run.args.budget
    if d.stationary:
        obstruction = class_A_obstruction(d)
        try:
            census = brute_force_orders(d, "stationary", budget)
        except BudgetExceeded as exc:
            return INCONCLUSIVE_EXIT, {"status": "BUDGET_EXCEEDED", "required": exc.required,
                                       "budget": exc.budget, "obstruction": obstruction.to_json()}
        top = d.depth
        name = run.name(d, top - 1)
        lines = []
        for words, verdict in census.iter_orders():
            lines.append(json.dumps({"words": [[name(x) for x in w] for w in words],
                                     "verdict": verdict.to_json(name)}, separators=(",", ":")))
        run.side("census.jsonl", "\n".join(lines) + "\n")
        body = census.to_json()
        body["obstruction"] = obstruction.to_json()
        if not run.args.out:
            body["orders"] = [json.loads(x) for x in lines]
        return (OK if census.perfect_tuples else NEGATIVE), body
    try:
        rows = brute_force_orders(d, "per_level", budget, run.args.depth)
    except BudgetExceeded as exc:
        return INCONCLUSIVE_EXIT, {"status": "BUDGET_EXCEEDED", "required": exc.required, "budget": exc.budget}
    lines = [json.dumps({"words": lv, "verdict": v.to_json()}, separators=(",", ":")) for lv, v in rows]
    run.side("census.jsonl", "\n".join(lines) + "\n")
    perfect = sum(v.perfect for _, v in rows)
    body = {"orders": len(rows), "perfect": perfect}
    if not run.args.out:
        body["lines"] = [json.loads(x) for x in lines]
    return (OK if perfect else NEGATIVE), body


def cmd_infinitesimal(run, b):
    _need(b, "skeleton", "sigma")
    args = run.args
    n = args.level if args.level is not None else 2
    k = args.offset
    vts = sorted(b.sigma.maps.get(n - 1, {})) if args.vertex is None else [args.vertex]
    vectors, skipped = [], []
    for vt in vts:
        try:
            vectors.append(epsilon_vector(b.diagram, b.skeleton, b.sigma, n, vt, k))
        except InfinitesimalError as exc:
            skipped.append({"vtilde": vt, "reason": str(exc)})
    rank, dep = independence_rank(vectors) if vectors else (0, None)
    entries = []
    status = OK
    for vec in vectors:
        e = vec.to_json()
        e["name"] = b.diagram.name(n - 1, vec.vtilde)
        e["propagation"] = propagate_family(b.diagram, b.skeleton, b.sigma, n, vec.vtilde).to_json()
        if b.diagram.stationary and classify(b.diagram).simple:
            e["pairing"] = perron_pairing_check(b.diagram, vec).to_json()
            if not e["pairing"]["ok"]:
                status = NEGATIVE
        if not (vec.consistent and e["propagation"]["ok"]):
            status = NEGATIVE
        entries.append(e)
    return status, {"base": n, "offset": k, "vectors": entries, "skipped": skipped,
                    "rank": rank, "dependency": dep}


COMMANDS = {
    "validate": (cmd_validate, "check the diagram, skeleton and correspondence"),
    "telescope": (cmd_telescope, "telescope the diagram (and order) to chosen levels"),
    "words": (cmd_words, "emit the words w(v, m, n)"),
    "language": (cmd_language, "two-letter factors of the words at one level"),
    "hgraph": (cmd_hgraph, "cells, edges and connectivity of the cell graph"),
    "balance": (cmd_balance, "solve or check the balance decomposition"),
    "synthesize": (cmd_synthesize, "build vertex words or a whole order from a skeleton"),
    "verify": (cmd_verify, "perfectness verdict for an order"),
    "census": (cmd_census, "enumerate every order and classify it"),
    "infinitesimal": (cmd_infinitesimal, "signed vectors from the skeleton, rank and pairing"),
}


def build_parser():
    p = argparse.ArgumentParser(prog="bratteli", description="Orderings on Bratteli diagrams.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_, description=help_)
        s.add_argument("input", nargs="?", help="bundle JSON file or bundled fixture name")
        s.add_argument("--diagram", help="diagram JSON (overrides the bundle)")
        s.add_argument("--order", help="order JSON (overrides the bundle)")
        s.add_argument("--skeleton", help="skeleton/sigma JSON (overrides the bundle)")
        s.add_argument("--depth", type=int, help="depth to extend or check to")
        s.add_argument("--horizon", type=int, help="language horizon")
        s.add_argument("--budget", type=int, default=100_000, help="maximum orders to enumerate")
        s.add_argument("--dot", action="store_true", help="write DOT files per (level, u)")
        s.add_argument("--out", metavar="DIR", help="write reports into DIR")
        s.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
        s.add_argument("--level", type=int, help="level n (words into V_{n+1} for synthesis)")
        s.add_argument("--vertex", type=int, help="vertex index")
        if name == "words":
            s.add_argument("--from", dest="frm", type=int, help="lower level m")
            s.add_argument("--to", type=int, help="upper level n")
        if name == "telescope":
            s.add_argument("--levels", help="comma separated kept levels, starting at 0")
        if name == "synthesize":
            s.add_argument("--all", action="store_true", help="ignore the bundle target")
        if name == "infinitesimal":
            s.add_argument("--offset", type=int, default=1, help="level offset k")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    run = Run(args)
    fn = COMMANDS[args.command][0]
    try:
        if args.input is None and args.diagram is None:
            raise InputError("give a bundle file, a fixture name or --diagram")
        bundle = _bundle(args)
        status, body = fn(run, bundle)
    except InputError as exc:
        status, body = INPUT_ERROR, {"status": "INPUT_ERROR", "message": str(exc)}
    except (DiagramError, OrderError, SkeletonError, InfinitesimalError) as exc:
        status, body = INPUT_ERROR, {"status": "INPUT_ERROR", "message": f"{type(exc).__name__}: {exc}"}
    report = run.report(args.command, body)
    report["exit_status"] = status
    text = dump_json(report)
    if args.out:
        out = Path(args.out)
        write_atomic(out / f"{args.command}.json", text)
        for fname, content in run.files.items():
            write_atomic(out / fname, content)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 accepted/found, 1 input error, 2 rejected/refuted, 3 unknown within bounds.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from . import serialize as ser
from .bipartite import build_bipartite, recover_side
from .graph import GraphError, vertex_matrix
from .matrix import DimensionError, Matrix
from .pipeline import DEFAULT_WINDOW, certify, graphs_for, random_witness
from .report import Report
from .search import (
    NotRegularError,
    SearchBounds,
    Status,
    search_chain,
    search_esse,
    verify_chain,
    verify_esse,
)
from .shift import allowed_words, periodic_word_count

EXIT_OK, EXIT_INPUT, EXIT_REJECT, EXIT_UNKNOWN = 0, 1, 2, 3
_STATUS_EXIT = {Status.FOUND: EXIT_OK, Status.REFUTED: EXIT_REJECT, Status.UNKNOWN: EXIT_UNKNOWN}


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _load_matrix(path: str) -> Matrix:
    return ser.matrix_from_json(ser.load_json(path), path)


def _vertex_list(text: str | None, n: int, default_prefix: str, flag: str) -> tuple[str, ...]:
    if text is None:
        return tuple(f"{default_prefix}{i}" for i in range(n))
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    if len(names) != n:
        raise InputError(f"{flag} lists {len(names)} vertices, the witness needs {n}")
    return names


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, doc: dict, reports: Sequence[Report]) -> None:
    if args.format == "text":
        _emit(args, "\n".join(r.to_text() for r in reports) + "\n")
    else:
        _emit(args, ser.dumps(doc))


def _bounds(args) -> SearchBounds:
    return SearchBounds(
        max_inner_dim=getattr(args, "max_inner", None),
        max_entry=getattr(args, "max_entry", None),
        max_chain_length=getattr(args, "max_len", None) or 6,
        max_intermediate_dim=getattr(args, "max_dim", None) or 8,
        max_states=getattr(args, "max_states", None) or 2000,
    )


def cmd_verify_esse(args) -> int:
    a, b = _load_matrix(args.a), _load_matrix(args.b)
    w = ser.witness_from_json(ser.load_json(args.witness), args.witness)
    rep = verify_esse(a, b, w)
    _emit_report(args, rep.to_dict(), [rep])
    for c in rep.failures:
        print(f"reject: {c.detail or c.name}", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_REJECT


def cmd_verify_chain(args) -> int:
    chain = ser.chain_from_json(ser.load_json(args.chain), args.chain)
    rep = verify_chain(chain)
    _emit_report(args, rep.to_dict(), [rep])
    return EXIT_OK if rep.ok else EXIT_REJECT


def cmd_search_esse(args) -> int:
    a, b = _load_matrix(args.a), _load_matrix(args.b)
    bounds = _bounds(args).resolve(a, b)
    res = search_esse(a, b, bounds)
    doc = {"status": res.status.value,
           "bounds": {"max_inner_dim": bounds.max_inner_dim, "max_entry": bounds.max_entry}}
    if res.witness is not None:
        doc["witness"] = ser.witness_to_json(res.witness)
    if res.refutation is not None:
        doc["refutation"] = str(res.refutation)
    if args.format == "text":
        lines = [f"search-esse: {res.status.value}"]
        if res.witness is not None:
            lines.append(f"  R = {res.witness.r.to_rows()}")
            lines.append(f"  S = {res.witness.s.to_rows()}")
        if res.refutation is not None:
            lines.append(f"  refutation: {res.refutation}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, ser.dumps(doc))
    if res.refutation is not None:
        print(f"refuted: {res.refutation}", file=sys.stderr)
    return _STATUS_EXIT[res.status]


def cmd_search_chain(args) -> int:
    a, b = _load_matrix(args.a), _load_matrix(args.b)
    bounds = _bounds(args).resolve(a, b)
    res = search_chain(a, b, bounds)
    doc = {"status": res.status.value, "states_expanded": res.states_expanded}
    if res.chain is not None:
        doc["chain"] = ser.chain_to_json(res.chain)
    if res.refutation is not None:
        doc["refutation"] = str(res.refutation)
    if args.format == "text":
        lines = [f"search-chain: {res.status.value}"]
        if res.chain is not None:
            lines += [f"  C{i + 1} = {m.to_rows()}" for i, m in enumerate(res.chain.matrices)]
        if res.refutation is not None:
            lines.append(f"  refutation: {res.refutation}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, ser.dumps(doc))
    if res.refutation is not None:
        print(f"refuted: {res.refutation}", file=sys.stderr)
    return _STATUS_EXIT[res.status]


def cmd_bipartite(args) -> int:
    w = ser.witness_from_json(ser.load_json(args.witness), args.witness)
    ev = _vertex_list(args.e_vertices, w.r.rows, "v", "--e-vertices")
    fv = _vertex_list(args.f_vertices, w.r.cols, "u", "--f-vertices")
    g = build_bipartite(ev, fv, w.r, w.s)
    dot = ser.bipartite_to_dot(g)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(dot)
    if args.format == "dot":
        _emit(args, dot)
        return EXIT_OK
    e_graph, be = recover_side(g, "E")
    f_graph, bf = recover_side(g, "F")
    doc = {
        "graph": ser.graph_to_json(g.graph),
        "e_vertices": list(g.e_vertices),
        "f_vertices": list(g.f_vertices),
        "r_edges": list(g.r_edges),
        "s_edges": list(g.s_edges),
        "E": {"vertex_matrix": ser.matrix_to_json(vertex_matrix(e_graph)),
              "paths": {k: list(v) for k, v in be.items()}},
        "F": {"vertex_matrix": ser.matrix_to_json(vertex_matrix(f_graph)),
              "paths": {k: list(v) for k, v in bf.items()}},
    }
    if args.format == "text":
        lines = [f"G_RS: {len(g.graph.vertices)} vertices, {len(g.graph.edges)} edges"]
        lines += [f"  {e.id}: {e.src} -> {e.rng}" for e in g.graph.edges]
        lines.append(f"E copy: {vertex_matrix(e_graph).to_rows()}")
        lines.append(f"F copy: {vertex_matrix(f_graph).to_rows()}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, ser.dumps(doc))
    return EXIT_OK


def cmd_certify(args) -> int:
    e = ser.graph_or_matrix_from_json(ser.load_json(args.a), "E", args.a)
    f = ser.graph_or_matrix_from_json(ser.load_json(args.b), "F", args.b)
    if set(e.vertices) & set(f.vertices):
        raise InputError("E and F must use disjoint vertex ids")
    w = ser.witness_from_json(ser.load_json(args.witness), args.witness)
    ok, reports, data = certify(e, f, w, args.window)
    doc = {
        "certificate": "elementary strong shift equivalence",
        "accepted": ok,
        "inputs": {"E": ser.graph_to_json(e), "F": ser.graph_to_json(f),
                   "witness": ser.witness_to_json(w), "window": args.window},
        "checks": [r.to_dict() for r in reports],
        **data,
    }
    _emit_report(args, doc, reports)
    return EXIT_OK if ok else EXIT_REJECT


def _load_graph(path: str):
    return ser.graph_or_matrix_from_json(ser.load_json(path), "", path)


def cmd_shift_words(args) -> int:
    g = _load_graph(args.graph)
    words = allowed_words(g, args.len)
    if args.format == "text":
        _emit(args, "".join(" ".join(w) + "\n" for w in words))
    else:
        _emit(args, ser.dumps({"length": args.len, "count": len(words),
                               "words": [list(w) for w in words]}))
    return EXIT_OK


def cmd_periodic(args) -> int:
    g = _load_graph(args.graph)
    counts = {k: periodic_word_count(g, k) for k in range(1, args.k + 1)}
    if args.format == "text":
        _emit(args, "".join(f"{k} {c}\n" for k, c in counts.items()))
    else:
        _emit(args, ser.dumps({"k": args.k, "counts": [counts[k] for k in range(1, args.k + 1)]}))
    return EXIT_OK


def cmd_fuzz(args) -> int:
    rng = random.Random(args.seed)
    failures = []
    for i in range(args.count):
        w = random_witness(rng, args.max_dim, args.max_entry)
        e, f = graphs_for(w)
        ok, reports, _ = certify(e, f, w, args.window)
        if not ok:
            failures.append({"case": i, "witness": ser.witness_to_json(w),
                             "failed": [c.name for r in reports for c in r.failures]})
    doc = {"seed": args.seed, "count": args.count, "failures": failures}
    if args.format == "text":
        _emit(args, f"fuzz seed={args.seed}: {args.count - len(failures)}/{args.count} accepted\n")
    else:
        _emit(args, ser.dumps(doc))
    return EXIT_OK if not failures else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    p = argparse.ArgumentParser(prog="sse-graphs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-esse", parents=[common], help="check A = RS and B = SR")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--witness", required=True)
    s.set_defaults(func=cmd_verify_esse)

    s = sub.add_parser("verify-chain", parents=[common], help="check every link of a chain")
    s.add_argument("chain")
    s.set_defaults(func=cmd_verify_chain)

    s = sub.add_parser("search-esse", parents=[common], help="bounded search for a witness")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--max-inner", type=_positive)
    s.add_argument("--max-entry", type=_positive)
    s.set_defaults(func=cmd_search_esse)

    s = sub.add_parser("search-chain", parents=[common], help="bounded search for a chain")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--max-len", type=_positive)
    s.add_argument("--max-dim", type=_positive)
    s.add_argument("--max-entry", type=_positive)
    s.add_argument("--max-states", type=_positive)
    s.set_defaults(func=cmd_search_chain)

    s = sub.add_parser("bipartite", parents=[common], help="build G_RS from a witness")
    s.add_argument("--witness", required=True)
    s.add_argument("--e-vertices", help="comma-separated E-side vertex ids")
    s.add_argument("--f-vertices", help="comma-separated F-side vertex ids")
    s.add_argument("--dot", help="also write a DOT rendering here")
    s.set_defaults(func=cmd_bipartite)

    s = sub.add_parser("certify", parents=[common], help="full certificate for one elementary step")
    s.add_argument("a", help="graph or vertex matrix of E")
    s.add_argument("b", help="graph or vertex matrix of F")
    s.add_argument("--witness", required=True)
    s.add_argument("--window", type=_positive, default=DEFAULT_WINDOW)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("shift-words", parents=[common], help="allowed words of a given length")
    s.add_argument("graph")
    s.add_argument("--len", type=_positive, required=True)
    s.set_defaults(func=cmd_shift_words)

    s = sub.add_parser("periodic", parents=[common], help="closed-path counts for k = 1..K")
    s.add_argument("graph")
    s.add_argument("--k", type=_positive, required=True)
    s.set_defaults(func=cmd_periodic)

    s = sub.add_parser("fuzz", parents=[common], help="certify random witnesses")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=_positive, default=100)
    s.add_argument("--max-dim", type=_positive, default=3)
    s.add_argument("--max-entry", type=_positive, default=2)
    s.add_argument("--window", type=_positive, default=6)
    s.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "certify" and args.window < 3:
        print("error: --window must be at least 3", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ser.SchemaError, InputError, GraphError, DimensionError, NotRegularError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

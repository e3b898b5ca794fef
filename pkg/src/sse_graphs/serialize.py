"""JSON and DOT formats.

Matrix:  {"rows": n, "cols": m, "entries": [[...], ...]}
Graph:   {"vertices": ["v", ...], "edges": [{"id": "a", "src": "v", "rng": "v"}, ...]}
Witness: {"R": <matrix>, "S": <matrix>}
Chain:   {"matrices": [<matrix>, ...], "witnesses": [<witness>, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .bipartite import BipartiteInflation
from .graph import Edge, Graph, GraphError, graph_from_matrix
from .matrix import Matrix
from .search import EsseWitness, SseChain


class SchemaError(ValueError):
    pass


def _require(doc: Any, key: str, kind: type, where: str):
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in doc:
        raise SchemaError(f"{where}: missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise SchemaError(f"{where}: {key!r} must be {kind.__name__}")
    return value


def matrix_to_json(a: Matrix) -> dict:
    return {"rows": a.rows, "cols": a.cols, "entries": a.to_rows()}


def matrix_from_json(doc: Any, where: str = "matrix") -> Matrix:
    rows = _require(doc, "rows", int, where)
    cols = _require(doc, "cols", int, where)
    entries = _require(doc, "entries", list, where)
    if rows < 1 or cols < 1:
        raise SchemaError(f"{where}: rows and cols must be positive")
    if len(entries) != rows or any(not isinstance(r, list) or len(r) != cols for r in entries):
        raise SchemaError(f"{where}: entries must be {rows} rows of {cols} values")
    for r in entries:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise SchemaError(f"{where}: entries must be non-negative integers, got {x!r}")
    return Matrix.from_rows(entries)


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "rng": e.rng} for e in g.edges],
    }


def graph_from_json(doc: Any, where: str = "graph") -> Graph:
    vertices = _require(doc, "vertices", list, where)
    edges = _require(doc, "edges", list, where)
    if any(not isinstance(v, str) for v in vertices):
        raise SchemaError(f"{where}: vertex ids must be strings")
    parsed = []
    for i, e in enumerate(edges):
        parsed.append(Edge(*(_require(e, k, str, f"{where}.edges[{i}]") for k in ("id", "src", "rng"))))
    try:
        return Graph(tuple(vertices), tuple(parsed))
    except GraphError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def graph_or_matrix_from_json(doc: Any, prefix: str = "", where: str = "input") -> Graph:
    """Accept either a graph document or a vertex matrix (expanded with :func:`graph_from_matrix`)."""
    if isinstance(doc, dict) and "vertices" in doc:
        return graph_from_json(doc, where)
    a = matrix_from_json(doc, where)
    if not a.is_square:
        raise SchemaError(f"{where}: a vertex matrix must be square")
    return graph_from_matrix(a, prefix)


def witness_to_json(w: EsseWitness) -> dict:
    return {"R": matrix_to_json(w.r), "S": matrix_to_json(w.s)}


def witness_from_json(doc: Any, where: str = "witness") -> EsseWitness:
    if isinstance(doc, dict) and "witness" in doc and "R" not in doc:
        doc = doc["witness"]
    if not isinstance(doc, dict) or "R" not in doc or "S" not in doc:
        raise SchemaError(f"{where}: expected keys 'R' and 'S'")
    return EsseWitness(matrix_from_json(doc["R"], f"{where}.R"),
                       matrix_from_json(doc["S"], f"{where}.S"))


def chain_to_json(c: SseChain) -> dict:
    return {
        "matrices": [matrix_to_json(m) for m in c.matrices],
        "witnesses": [witness_to_json(w) for w in c.witnesses],
    }


def chain_from_json(doc: Any, where: str = "chain") -> SseChain:
    if isinstance(doc, dict) and "chain" in doc and "matrices" not in doc:
        doc = doc["chain"]
    mats = _require(doc, "matrices", list, where)
    wits = _require(doc, "witnesses", list, where)
    return SseChain(
        tuple(matrix_from_json(m, f"{where}.matrices[{i}]") for i, m in enumerate(mats)),
        tuple(witness_from_json(w, f"{where}.witnesses[{i}]") for i, w in enumerate(wits)),
    )


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc})") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def bipartite_to_dot(g: BipartiteInflation, name: str = "G_RS") -> str:
    """E-side vertices as boxes, F-side as ellipses; R-edges solid, S-edges dashed."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;"]
    for v in g.e_vertices:
        lines.append(f"  {_dot_id(v)} [shape=box];")
    for v in g.f_vertices:
        lines.append(f"  {_dot_id(v)} [shape=ellipse];")
    r_edges = set(g.r_edges)
    for e in g.graph.edges:
        style = "solid" if e.id in r_edges else "dashed"
        lines.append(f"  {_dot_id(e.src)} -> {_dot_id(e.rng)} [label={_dot_id(e.id)}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"digraph {_dot_id(name)} {{"]
    for v in g.vertices:
        lines.append(f"  {_dot_id(v)};")
    for e in g.edges:
        lines.append(f"  {_dot_id(e.src)} -> {_dot_id(e.rng)} [label={_dot_id(e.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

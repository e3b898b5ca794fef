"""Finite directed multigraphs with named edges."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .matrix import Matrix


class Edge(NamedTuple):
    id: str
    src: str
    rng: str


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """A quadruple (vertices, edges, range, source).

    Vertex order fixes the row/column order of :func:`vertex_matrix`.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(Edge(*e) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex ids")
        vset = set(vertices)
        by_id = {}
        out = {v: [] for v in vertices}
        for e in edges:
            if e.id in by_id:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.src not in vset or e.rng not in vset:
                raise GraphError(f"edge {e.id!r} has an endpoint outside the vertex list")
            by_id[e.id] = e
            out[e.src].append(e)
        for v in out:
            out[v].sort(key=lambda e: e.id)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in out.items()})

    def edge(self, edge_id: str) -> Edge:
        return self._by_id[edge_id]

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id

    def source(self, edge_id: str) -> str:
        return self._by_id[edge_id].src

    def range(self, edge_id: str) -> str:
        return self._by_id[edge_id].rng

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        """Edges emitted by ``v``, sorted by id."""
        return self._out[v]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: e.id)

    def subgraph_edges(self, edge_ids: Iterable[str]) -> "Graph":
        keep = set(edge_ids)
        return Graph(self.vertices, tuple(e for e in self.edges if e.id in keep))


def vertex_matrix(g: Graph) -> Matrix:
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    counts = [0] * (n * n)
    for e in g.edges:
        counts[index[e.src] * n + index[e.rng]] += 1
    return Matrix(n, n, tuple(counts))


def graph_from_matrix(a: Matrix, prefix: str = "") -> Graph:
    if not a.is_square:
        raise GraphError("vertex matrices are square")
    vertices = tuple(f"{prefix}v{i}" for i in range(a.rows))
    edges = []
    for i in range(a.rows):
        for j in range(a.cols):
            for k in range(a[i, j]):
                edges.append(Edge(f"{prefix}e{i}_{j}_{k}", vertices[i], vertices[j]))
    return Graph(vertices, tuple(edges))


def is_regular_graph(g: Graph) -> bool:
    """Every vertex emits at least one edge (finiteness is automatic here)."""
    return all(g.out_edges(v) for v in g.vertices)


def sinks(g: Graph) -> list[str]:
    return [v for v in g.vertices if not g.out_edges(v)]


def hereditary_closure(g: Graph, start: Iterable[str]) -> frozenset[str]:
    """Smallest vertex set containing ``start`` and closed under taking ranges of emitted edges."""
    start = set(start)
    unknown = start - set(g.vertices)
    if unknown:
        raise GraphError(f"unknown vertices {sorted(unknown)}")
    seen = set(start)
    stack = list(start)
    while stack:
        v = stack.pop()
        for e in g.out_edges(v):
            if e.rng not in seen:
                seen.add(e.rng)
                stack.append(e.rng)
    return frozenset(seen)


def saturated_hereditary_closure(g: Graph, start: Iterable[str]) -> frozenset[str]:
    """Hereditary closure that also absorbs every vertex whose emitted edges all land inside.

    In a regular graph the ideal generated by the vertex projections of ``start``
    is everything exactly when this closure is the whole vertex set.
    """
    h = set(hereditary_closure(g, start))
    while True:
        extra = {v for v in g.vertices
                 if v not in h and g.out_edges(v) and all(e.rng in h for e in g.out_edges(v))}
        if not extra:
            return frozenset(h)
        h = set(hereditary_closure(g, h | extra))


def paths_of_length(g: Graph, n: int, start: Iterable[str] | None = None) -> list[tuple[str, ...]]:
    """All composable edge sequences of length ``n`` beginning in ``start``.

    Output is sorted lexicographically by edge ids.
    """
    if n < 1:
        raise ValueError("path length must be at least 1")
    starts = set(g.vertices) if start is None else set(start)
    paths = [(e.id,) for e in g.sorted_edges() if e.src in starts]
    for _ in range(n - 1):
        paths = [p + (e.id,) for p in paths for e in g.out_edges(g.range(p[-1]))]
    return sorted(paths)


def is_composable(g: Graph, word: Iterable[str]) -> bool:
    prev = None
    for edge_id in word:
        if not g.has_edge(edge_id):
            return False
        if prev is not None and g.range(prev) != g.source(edge_id):
            return False
        prev = edge_id
    return True


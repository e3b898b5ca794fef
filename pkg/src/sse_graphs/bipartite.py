"""The bipartite graph G_{R,S} of a witness and the length-2 path copies of E and F.

Edges coming from R are named ``r_{v}_{w}_{k}`` and run E-side to F-side; edges
coming from S are named ``s_{w}_{v}_{k}`` and run back.  The R-tagged and
S-tagged subgraphs play the roles of G_R and G_S.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .graph import Edge, Graph, GraphError, paths_of_length, vertex_matrix
from .matrix import DimensionError, Matrix, multiply
from .report import Report
from .search import EsseWitness

E_SIDE = "E"
F_SIDE = "F"


class BijectionError(ValueError):
    pass


@dataclass(frozen=True)
class BipartiteInflation:
    graph: Graph
    e_vertices: tuple[str, ...]
    f_vertices: tuple[str, ...]
    r_edges: tuple[str, ...]
    s_edges: tuple[str, ...]

    def side_vertices(self, side: str) -> tuple[str, ...]:
        if side == E_SIDE:
            return self.e_vertices
        if side == F_SIDE:
            return self.f_vertices
        raise ValueError(f"side must be 'E' or 'F', got {side!r}")

    @property
    def g_r(self) -> Graph:
        return self.graph.subgraph_edges(self.r_edges)

    @property
    def g_s(self) -> Graph:
        return self.graph.subgraph_edges(self.s_edges)

    def r_matrix(self) -> Matrix:
        return _block(self, self.e_vertices, self.f_vertices)

    def s_matrix(self) -> Matrix:
        return _block(self, self.f_vertices, self.e_vertices)


def _block(g: BipartiteInflation, rows, cols) -> Matrix:
    ri = {v: i for i, v in enumerate(rows)}
    ci = {v: j for j, v in enumerate(cols)}
    counts = [0] * (len(rows) * len(cols))
    for e in g.graph.edges:
        if e.src in ri and e.rng in ci:
            counts[ri[e.src] * len(cols) + ci[e.rng]] += 1
    return Matrix(len(rows), len(cols), tuple(counts))


@dataclass(frozen=True)
class PathBijection:
    """Edge id of one side's graph -> the length-2 path (first, second) in G_{R,S}.

    For side E the pair is (r_edge, s_edge); for side F it is (s_edge, r_edge).
    """

    side: str
    mapping: dict

    def __len__(self):
        return len(self.mapping)

    def __getitem__(self, edge_id: str) -> tuple[str, str]:
        return self.mapping[edge_id]

    def inverse(self) -> dict:
        return {pair: e for e, pair in self.mapping.items()}

    def items(self):
        return sorted(self.mapping.items())


def build_bipartite(e_vertices: Sequence[str], f_vertices: Sequence[str],
                    r: Matrix, s: Matrix) -> BipartiteInflation:
    e_vertices, f_vertices = tuple(e_vertices), tuple(f_vertices)
    n, m = len(e_vertices), len(f_vertices)
    if r.shape != (n, m):
        raise DimensionError(f"R must be {n}x{m}, got {r.rows}x{r.cols}")
    if s.shape != (m, n):
        raise DimensionError(f"S must be {m}x{n}, got {s.rows}x{s.cols}")
    clash = set(e_vertices) & set(f_vertices)
    if clash:
        raise GraphError(f"vertex ids shared by both sides: {sorted(clash)}")
    r_edges, s_edges = [], []
    for i, v in enumerate(e_vertices):
        for j, w in enumerate(f_vertices):
            r_edges += [Edge(f"r_{v}_{w}_{k}", v, w) for k in range(r[i, j])]
    for j, w in enumerate(f_vertices):
        for i, v in enumerate(e_vertices):
            s_edges += [Edge(f"s_{w}_{v}_{k}", w, v) for k in range(s[j, i])]
    graph = Graph(e_vertices + f_vertices, tuple(r_edges + s_edges))
    return BipartiteInflation(graph, e_vertices, f_vertices,
                              tuple(e.id for e in r_edges), tuple(e.id for e in s_edges))


def _path_id(pair: tuple[str, str]) -> str:
    return f"{pair[0]}|{pair[1]}"


def recover_side(g: BipartiteInflation, side: str,
                 target: Graph | None = None) -> tuple[Graph, PathBijection]:
    """The graph of length-2 paths starting on ``side``, and its edge <-> path bijection.

    Without ``target`` the edges are named ``first|second``.  With ``target``, its
    edges are matched to paths with the same endpoints, both taken in sorted id
    order, and ``target`` itself is returned.
    """
    verts = g.side_vertices(side)
    paths = paths_of_length(g.graph, 2, verts)
    if target is None:
        edges = tuple(Edge(_path_id(p), g.graph.source(p[0]), g.graph.range(p[1])) for p in paths)
        graph = Graph(verts, edges)
        return graph, PathBijection(side, {_path_id(p): p for p in paths})

    if set(target.vertices) != set(verts):
        raise BijectionError(f"target vertices {target.vertices} do not match side {side} {verts}")
    buckets = defaultdict(list)
    for p in paths:
        buckets[g.graph.source(p[0]), g.graph.range(p[1])].append(p)
    mapping = {}
    for (v, w), group in sorted(_edge_buckets(target).items()):
        candidates = buckets.get((v, w), [])
        if len(candidates) != len(group):
            raise BijectionError(
                f"{len(group)} edges {v}->{w} in target but {len(candidates)} paths in G_RS")
        for e, p in zip(group, candidates):
            mapping[e.id] = p
    if len(mapping) != len(paths):
        raise BijectionError(f"target has {len(mapping)} edges but there are {len(paths)} paths")
    return target, PathBijection(side, mapping)


def _edge_buckets(g: Graph) -> dict:
    out = defaultdict(list)
    for e in g.sorted_edges():
        out[e.src, e.rng].append(e)
    return out


def check_path_bijection(g: BipartiteInflation, target: Graph, bij: PathBijection) -> Report:
    """Confirm ``bij`` pairs every target edge with a distinct composable 2-path of matching endpoints."""
    rep = Report(f"path-bijection-{bij.side}")
    verts = set(g.side_vertices(bij.side))
    paths = set(paths_of_length(g.graph, 2, verts))
    first_tags = set(g.r_edges) if bij.side == E_SIDE else set(g.s_edges)
    rep.add("covers every edge", set(bij.mapping) == {e.id for e in target.edges},
            f"{len(bij.mapping)} of {len(target.edges)}")
    images = list(bij.mapping.values())
    rep.add("injective", len(set(images)) == len(images))
    rep.add("onto the 2-paths", set(images) == paths, f"{len(set(images))} of {len(paths)}")
    bad = []
    for e_id, (p, q) in bij.items():
        if not target.has_edge(e_id) or not g.graph.has_edge(p) or not g.graph.has_edge(q):
            bad.append(e_id)
            continue
        e = target.edge(e_id)
        if (p not in first_tags or g.graph.range(p) != g.graph.source(q)
                or g.graph.source(p) != e.src or g.graph.range(q) != e.rng):
            bad.append(e_id)
    rep.add("endpoints compatible", not bad, ", ".join(bad))
    return rep


def _fresh_vertices(count: int, taken: set, stem: str = "u") -> tuple[str, ...]:
    prefix = stem
    while any(v.startswith(prefix) for v in taken):
        prefix += "_"
    return tuple(f"{prefix}{i}" for i in range(count))


def tensor_decomposition_check(e: Graph, w: EsseWitness) -> Report:
    """Basis-level X(E) = X(G_R) (x) X(G_S): edges of E <-> composable (R-edge, S-edge) pairs."""
    rep = Report("tensor-decomposition")
    a = vertex_matrix(e)
    shapes_ok = (w.r.rows == a.rows and w.s.cols == a.rows and w.r.cols == w.s.rows)
    rep.add("witness shapes", shapes_ok,
            f"A_E {a.rows}x{a.cols}, R {w.r.rows}x{w.r.cols}, S {w.s.rows}x{w.s.cols}")
    if not shapes_ok:
        return rep
    rs = multiply(w.r, w.s)
    rep.add("A_E = RS", rs == a, "" if rs == a else f"RS = {rs.to_rows()}, A_E = {a.to_rows()}")
    f_vertices = _fresh_vertices(w.r.cols, set(e.vertices))
    g = build_bipartite(e.vertices, f_vertices, w.r, w.s)
    pairs = paths_of_length(g.graph, 2, e.vertices)
    rep.add("edge count = pair count", len(e.edges) == len(pairs),
            f"{len(e.edges)} edges, {len(pairs)} pairs")
    try:
        _, bij = recover_side(g, E_SIDE, target=e)
    except BijectionError as exc:
        rep.add("bijection", False, str(exc))
        return rep
    rep.extend(check_path_bijection(g, e, bij))
    rep.data["bijection"] = {k: list(v) for k, v in bij.items()}
    return rep

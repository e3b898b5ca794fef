"""End-to-end certificate for one elementary step, and random witnesses for fuzzing."""

from __future__ import annotations

import random

from .bipartite import BijectionError, build_bipartite, recover_side, tensor_decomposition_check
from .ck import certify_corner_embedding
from .graph import Graph, graph_from_matrix, vertex_matrix
from .matrix import Matrix, multiply
from .report import Report
from .search import EsseWitness, verify_esse
from .shift import conjugacy_code, verify_conjugacy_window

DEFAULT_WINDOW = 8


def certify(e: Graph, f: Graph, w: EsseWitness, window: int = DEFAULT_WINDOW,
            depth: int = 2) -> tuple[bool, list[Report], dict]:
    """Run every check for ``A_E = RS``, ``A_F = SR``.

    Returns (accepted, reports, extra data).  Later stages are skipped once the
    witness itself fails to verify.
    """
    reports = []
    data: dict = {}
    esse = verify_esse(vertex_matrix(e), vertex_matrix(f), w)
    reports.append(esse)
    if not esse.ok:
        return False, reports, data

    g = build_bipartite(e.vertices, f.vertices, w.r, w.s)
    try:
        _, be = recover_side(g, "E", target=e)
        _, bf = recover_side(g, "F", target=f)
    except BijectionError as exc:
        rep = Report("recover-sides")
        rep.add("length-2 paths match E and F", False, str(exc))
        reports.append(rep)
        return False, reports, data
    data["bijection_E"] = {k: list(v) for k, v in be.items()}
    data["bijection_F"] = {k: list(v) for k, v in bf.items()}

    rep = tensor_decomposition_check(e, w)
    rep.title += " E"
    reports.append(rep)
    rep = tensor_decomposition_check(f, w.swapped())
    rep.title += " F"
    reports.append(rep)

    code = conjugacy_code(e, f, g, be, bf)
    data["block_code"] = [[a, b, img] for (a, b), img in sorted(code.rule.items())]
    reports.append(verify_conjugacy_window(code, window))
    reports.append(certify_corner_embedding(e, f, g, be, bf, depth))
    return all(r.ok for r in reports), reports, data


def _random_regular(rng: random.Random, rows: int, cols: int, max_entry: int) -> Matrix:
    out = []
    for _ in range(rows):
        row = [0] * cols
        while not any(row):
            row = [rng.randint(0, max_entry) for _ in range(cols)]
        out.append(row)
    return Matrix.from_rows(out)


def random_witness(rng: random.Random, max_dim: int = 3, max_entry: int = 2) -> EsseWitness:
    """R (n x m) and S (m x n) with entries in [0, max_entry] and no zero rows."""
    n = rng.randint(1, max_dim)
    m = rng.randint(1, max_dim)
    return EsseWitness(_random_regular(rng, n, m, max_entry), _random_regular(rng, m, n, max_entry))


def graphs_for(w: EsseWitness) -> tuple[Graph, Graph]:
    return (graph_from_matrix(multiply(w.r, w.s), "E"),
            graph_from_matrix(multiply(w.s, w.r), "F"))

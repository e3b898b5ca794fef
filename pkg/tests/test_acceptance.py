"""Acceptance gate: eight criteria, one PASS/FAIL line each.

Run standalone with ``python3 tests/test_acceptance.py`` or through pytest,
which prints the same lines in its terminal summary.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import A_E, A_F, R, S, DATA, example_e, example_f  # noqa: E402

from sse_graphs.bipartite import build_bipartite, recover_side  # noqa: E402
from sse_graphs.ck import certify_corner_embedding  # noqa: E402
from sse_graphs.cli import main  # noqa: E402
from sse_graphs.graph import graph_from_matrix, hereditary_closure, vertex_matrix  # noqa: E402
from sse_graphs.matrix import Matrix, is_regular, multiply, trace_power  # noqa: E402
from sse_graphs.pipeline import graphs_for, random_witness  # noqa: E402
from sse_graphs.search import (  # noqa: E402
    EsseWitness,
    SearchBounds,
    Status,
    search_chain,
    search_esse,
    verify_chain,
    verify_esse,
)
from sse_graphs.shift import apply_code, conjugacy_code, periodic_word_count, verify_conjugacy_window  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def example_sides():
    e, f = example_e(), example_f()
    g = build_bipartite(e.vertices, f.vertices, R, S)
    _, be = recover_side(g, "E", target=e)
    _, bf = recover_side(g, "F", target=f)
    return e, f, g, be, bf


def criterion_1():
    rep, dt = timed(lambda: verify_esse(A_E, A_F, EsseWitness(R, S)))
    exact = multiply(R, S) == A_E and multiply(S, R) == A_F
    return rep.ok and exact and dt < 0.1, f"verify_esse accepts, exact products, {dt * 1e3:.2f} ms"


def criterion_2():
    def work():
        g = build_bipartite(("v", "w"), ("x", "y", "z"), R, S)
        ge, be = recover_side(g, "E")
        gf, bf = recover_side(g, "F")
        return g, ge, be, gf, bf
    (g, ge, be, gf, bf), dt = timed(work)
    ok = (len(g.graph.vertices) == 5 and len(g.graph.edges) == 6
          and vertex_matrix(ge) == A_E and len(be) == 3
          and vertex_matrix(gf) == A_F and len(bf) == 4 and dt < 0.1)
    return ok, (f"{len(g.graph.vertices)} vertices, {len(g.graph.edges)} edges, "
                f"|E bijection| {len(be)}, |F bijection| {len(bf)}, {dt * 1e3:.2f} ms")


def criterion_3():
    res, dt1 = timed(lambda: search_esse(A_E, A_F, SearchBounds(max_inner_dim=3, max_entry=1)))
    ok1 = res.found and verify_esse(A_E, A_F, res.witness).ok and dt1 < 1
    chain, dt2 = timed(lambda: search_chain(A_E, A_F))
    ok2 = chain.found and len(chain.chain.matrices) == 2 and verify_chain(chain.chain).ok and dt2 < 5
    return ok1 and ok2, f"search_esse {dt1 * 1e3:.1f} ms, search_chain length-2 chain {dt2 * 1e3:.1f} ms"


def criterion_4():
    ones, twos = Matrix.from_rows([[1]]), Matrix.from_rows([[2]])
    bounds = [None, SearchBounds(1, 1), SearchBounds(5, 9), SearchBounds(max_inner_dim=2)]
    refuted = all(
        (r := search_esse(ones, twos, b)).status is Status.REFUTED and r.refutation.k == 1
        for b in bounds)
    code = main(["search-esse", str(DATA / "ones1.json"), str(DATA / "twos.json"), "-o", "/dev/null"])
    return refuted and code == 2, f"refuted at k=1 under {len(bounds)} bound settings, CLI exit {code}"


def criterion_5():
    def work():
        e, f, g, be, bf = example_sides()
        code = conjugacy_code(e, f, g, be, bf)
        return code, apply_code(code, "aabcc"), verify_conjugacy_window(code, 8)
    (code, image, rep), dt = timed(work)
    periods = all(c.ok and c.detail == "2 = 2" for c in rep.checks
                  if c.name.startswith("period-"))
    n_periods = sum(c.name.startswith("period-") for c in rep.checks)
    ok = image == ("d", "e", "f", "g") and rep.ok and periods and n_periods == 7 and dt < 1
    return ok, f"aabcc -> {''.join(image)}, window l=8 accepted, period counts 2 = 2 for k=1..{n_periods}, {dt * 1e3:.1f} ms"


def criterion_6():
    def work():
        e, f, g, be, bf = example_sides()
        return g, certify_corner_embedding(e, f, g, be, bf, depth=2)
    (g, rep), dt = timed(work)
    names = [c.name for c in rep.checks]
    relations = [n for n in names if " (1): " in n or " (2): " in n or " (3): " in n]
    absorb = [c for c in rep.checks if c.name.endswith("generator images")]
    counts = sorted(int(c.name.split("all ")[1].split()[0]) for c in absorb)
    everything = set(g.graph.vertices)
    closures = (hereditary_closure(g.graph, g.e_vertices) == everything
                and hereditary_closure(g.graph, g.f_vertices) == everything)
    ok = rep.ok and "P + Q = 1" in names and counts == [5, 7] and closures and dt < 1
    return ok, (f"{len(rep.checks)} checks pass, {len(relations)} relation checks, "
                f"absorption over 5+7 images, closures = 5 vertices, {dt * 1e3:.1f} ms")


def _regular(rng, rows, cols, max_entry):
    out = []
    for _ in range(rows):
        row = [0] * cols
        while not any(row):
            row = [rng.randint(0, max_entry) for _ in range(cols)]
        out.append(row)
    return Matrix.from_rows(out)


def criterion_7():
    t0 = time.perf_counter()
    rng = random.Random(0)
    fail_a = 0
    for _ in range(200):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        r, s = _regular(rng, n, m, 2), _regular(rng, m, n, 2)
        rs, sr = multiply(r, s), multiply(s, r)
        fail_a += sum(trace_power(rs, k) != trace_power(sr, k) for k in range(1, 7))

    fail_b = graphs = 0
    for n in (1, 2, 3):
        for entries in itertools.product(range(3), repeat=n * n):
            a = Matrix(n, n, entries)
            g = graph_from_matrix(a)
            graphs += 1
            fail_b += sum(periodic_word_count(g, k) != trace_power(a, k) for k in range(1, 5))

    rng = random.Random(0)
    fail_c = 0
    for _ in range(100):
        w = random_witness(rng, 3, 2)
        e, f = graphs_for(w)
        g = build_bipartite(e.vertices, f.vertices, w.r, w.s)
        _, be = recover_side(g, "E", target=e)
        _, bf = recover_side(g, "F", target=f)
        ok = (verify_conjugacy_window(conjugacy_code(e, f, g, be, bf), 6).ok
              and certify_corner_embedding(e, f, g, be, bf).ok)
        fail_c += not ok
    dt = time.perf_counter() - t0
    ok = fail_a == 0 and fail_b == 0 and fail_c == 0 and dt < 60
    return ok, (f"(a) {fail_a} trace failures over 200 pairs, (b) {fail_b} failures over {graphs} graphs, "
                f"(c) {100 - fail_c}/100 witnesses certified, {dt:.1f} s")


def _all(rows, cols, max_entry):
    for t in itertools.product(range(max_entry + 1), repeat=rows * cols):
        yield Matrix(rows, cols, t)


def criterion_8():
    t0 = time.perf_counter()
    # naive nested loops over every R (n x k) and S (k x n') with k <= 2, entries <= 2
    witnessed = set()
    for n in (1, 2):
        for k in (1, 2):
            for r in _all(n, k, 2):
                for s in _all(k, n, 2):
                    if is_regular(r) and is_regular(s):
                        witnessed.add((multiply(r, s), multiply(s, r)))
    regs = [a for n in (1, 2) for a in _all(n, n, 2) if is_regular(a)]
    bounds = SearchBounds(max_inner_dim=2, max_entry=2)
    disagree = 0
    for a in regs:
        for b in regs:
            disagree += search_esse(a, b, bounds).found != ((a, b) in witnessed)
    dt = time.perf_counter() - t0
    pairs = len(regs) ** 2
    return disagree == 0, f"{disagree} disagreements over {pairs} pairs of regular matrices, {dt:.2f} s"


CRITERIA = {
    1: ("Example exactness", criterion_1),
    2: ("Bipartite reconstruction", criterion_2),
    3: ("Witness search", criterion_3),
    4: ("Refutation", criterion_4),
    5: ("Conjugacy window", criterion_5),
    6: ("CK certificate", criterion_6),
    7: ("Property suites", criterion_7),
    8: ("Oracle equivalence", criterion_8),
}


def line(number: int) -> str:
    ok, detail = RESULTS[number]
    return f"{'PASS' if ok else 'FAIL'} criterion {number} ({CRITERIA[number][0]}): {detail}"


def evaluate(number: int) -> bool:
    name, fn = CRITERIA[number]
    try:
        RESULTS[number] = fn()
    except Exception as exc:  # a crash counts as a failure with its message
        RESULTS[number] = (False, f"{type(exc).__name__}: {exc}")
    print(line(number))
    return RESULTS[number][0]


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    assert evaluate(number), line(number)


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)

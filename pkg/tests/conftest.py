import sys
from pathlib import Path

import pytest
from hypothesis import settings

from sse_graphs.bipartite import build_bipartite, recover_side
from sse_graphs.graph import Graph
from sse_graphs.matrix import Matrix
from sse_graphs.search import EsseWitness

# property tests replay the same examples on every run
settings.register_profile("fixed", derandomize=True, deadline=None)
settings.load_profile("fixed")

DATA = Path(__file__).resolve().parent.parent / "data" / "example"

A_E = Matrix.from_rows([[1, 1], [0, 1]])
A_F = Matrix.from_rows([[1, 1, 0], [0, 0, 1], [0, 0, 1]])
R = Matrix.from_rows([[1, 1, 0], [0, 0, 1]])
S = Matrix.from_rows([[1, 0], [0, 1], [0, 1]])

# Greek edge names of G_{R,S} for the example witness, under the r_/s_ id scheme
GREEK = {
    "beta": "r_v_x_0",
    "gamma": "r_v_y_0",
    "zeta": "r_w_z_0",
    "alpha": "s_x_v_0",
    "delta": "s_y_w_0",
    "epsilon": "s_z_w_0",
}


def example_e() -> Graph:
    return Graph(("v", "w"), (("a", "v", "v"), ("b", "v", "w"), ("c", "w", "w")))


def example_f() -> Graph:
    return Graph(("x", "y", "z"),
                 (("d", "x", "x"), ("e", "x", "y"), ("f", "y", "z"), ("g", "z", "z")))


@pytest.fixture
def E():
    return example_e()


@pytest.fixture
def F():
    return example_f()


@pytest.fixture
def witness():
    return EsseWitness(R, S)


@pytest.fixture
def inflation():
    return build_bipartite(("v", "w"), ("x", "y", "z"), R, S)


@pytest.fixture
def sides(inflation, E, F):
    _, be = recover_side(inflation, "E", target=E)
    _, bf = recover_side(inflation, "F", target=F)
    return be, bf


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(number))

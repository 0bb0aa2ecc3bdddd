import itertools

import numpy as np
import pytest

from euler_census import Graph, complete_graph, count_eulerian_circuits, cycle_graph
from euler_census.graph import disjoint_union, make_rng, random_even_graph, validate

ACCEPTANCE_LINES: list[str] = []


def bowtie() -> Graph:
    """Two triangles sharing vertex 3 (1-based); degrees 2,2,4,2,2."""
    return Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def random_connected_graph(n: int, p: float, rng) -> Graph:
    while True:
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
        g = Graph.from_edges(n, edges)
        if validate(g).is_connected:
            return g


def corpus() -> list[tuple[str, Graph]]:
    """Fixture graphs shared by the invariant suites."""
    out = [(f"K{n}", complete_graph(n)) for n in range(2, 10)]
    out += [(f"C{n}", cycle_graph(n)) for n in range(3, 9)]
    out.append(("bowtie", bowtie()))
    out.append(("2K3", disjoint_union(complete_graph(3), complete_graph(3))))
    rng = make_rng(2024)
    for i in range(12):
        n = int(rng.integers(3, 12))
        out.append((f"conn{i}", random_connected_graph(n, 0.5, rng)))
    for n, seed in [(6, 1), (10, 3), (12, 5), (20, 7), (30, 11)]:
        out.append((f"even{n}-{seed}", random_even_graph(n, 0.5, seed)))
    return out


@pytest.fixture(scope="session")
def graph_corpus():
    return corpus()


@pytest.fixture(scope="session")
def k7_count():
    return count_eulerian_circuits(complete_graph(7), node_budget=10**9)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance():
    def record(criterion: int, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

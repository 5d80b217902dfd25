import numpy as np
import pytest

from thresholdlab.hypergraph import Hypergraph


def random_hypergraph(rng: np.random.Generator, n_max=10, edges_max=6, size_max=4, n_min=1, allow_empty=False) -> Hypergraph:
    n = int(rng.integers(n_min, n_max + 1))
    count = int(rng.integers(1, edges_max + 1))
    edges = []
    for _ in range(count):
        k = int(rng.integers(0 if allow_empty else 1, min(size_max, n) + 1))
        edges.append(rng.choice(n, size=k, replace=False).tolist())
    return Hypergraph.from_sets(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from conftest import random_hypergraph
from oracles import brute_min_cover
from thresholdlab.cover import (
    CoverCertificate,
    certificate_status,
    cover_cost,
    is_cover,
    min_cover_cost,
    q_exact,
    verify_certificate,
)
from thresholdlab.errors import BudgetExceeded, DegenerateFamily, NoEdges
from thresholdlab.hypergraph import Hypergraph, to_mask
from thresholdlab.measures import p_c_bisect


def M(*sets):
    return [to_mask(s) for s in sets]


def test_cover_cost_examples():
    assert cover_cost(M({0}, {1, 2}), 0.5) == 0.75
    assert cover_cost(M(set()), 0.3) == 1.0
    assert cover_cost(M(set()), 0.0) == 1.0
    assert cover_cost([], 0.3) == 0.0


def test_is_cover_examples():
    h = Hypergraph.from_sets(3, [[0, 1], [0, 2]])
    assert is_cover(M(set()), h)
    assert is_cover(M({0}), h)
    assert not is_cover(M({1}), Hypergraph.from_sets(1, [[0]]))


def test_verify_certificate_examples():
    h = Hypergraph.from_sets(2, [[0, 1]])
    assert verify_certificate(CoverCertificate(tuple(M({0, 1})), 0.7), h)
    assert CoverCertificate(tuple(M({0, 1})), 0.7).cost == pytest.approx(0.49)
    assert not verify_certificate(CoverCertificate(tuple(M({0, 1})), 0.8), h)
    assert not verify_certificate(CoverCertificate(tuple(M(set())), 0.1), h)
    two = Hypergraph.from_sets(3, [[0, 1], [0, 2]])
    assert certificate_status(CoverCertificate(tuple(M({1})), 0.1), two) == ("NOT_A_COVER", 0b101)


@pytest.mark.parametrize("p", [0.6, 0.3])
def test_min_cover_single_edge(p):
    cost, fam = min_cover_cost(Hypergraph.from_sets(2, [[0, 1]]), p)
    assert cost == pytest.approx(p * p, abs=1e-15)
    assert fam == (0b11,)
    assert cost == pytest.approx(brute_min_cover(Hypergraph.from_sets(2, [[0, 1]]), p), abs=1e-15)


def test_min_cover_singletons():
    h = Hypergraph.from_sets(8, [[i] for i in range(8)])
    cost, fam = min_cover_cost(h, 0.05)
    assert cost == pytest.approx(0.4, abs=1e-15)
    assert sorted(fam) == [1 << i for i in range(8)]


def test_min_cover_can_beat_edges():
    # two edges sharing element 0: {0} costs p, the edges cost 2 p**2; p < 2 p**2 iff p > 1/2
    h = Hypergraph.from_sets(3, [[0, 1], [0, 2]])
    cost, fam = min_cover_cost(h, 0.8)
    assert cost == pytest.approx(0.8)
    assert fam == (0b1,)


def test_min_cover_tie_break_fewest_sets():
    # at p = 1/2, {0} costs 0.5 = 0.25 + 0.25 for the two edges
    h = Hypergraph.from_sets(3, [[0, 1], [0, 2]])
    cost, fam = min_cover_cost(h, 0.5)
    assert cost == 0.5 and fam == (0b1,)


def test_min_cover_oracle_agreement(rng):
    for _ in range(100):
        h = random_hypergraph(rng, n_max=8, edges_max=5, size_max=3)
        p = float(rng.random())
        cost, fam = min_cover_cost(h, p)
        assert is_cover(fam, h)
        assert cost == pytest.approx(cover_cost(fam, p), abs=1e-15)
        assert abs(cost - brute_min_cover(h, p)) <= 1e-12


def test_min_cover_invariants(rng):
    for _ in range(50):
        h = random_hypergraph(rng)
        ps = sorted(float(x) for x in rng.random(4))
        costs = [min_cover_cost(h, p)[0] for p in ps]
        assert all(a <= b + 1e-15 for a, b in zip(costs, costs[1:]))
        for p, c in zip(ps, costs):
            assert c <= cover_cost(h.edges, p) + 1e-15


def test_min_cover_budget():
    with pytest.raises(BudgetExceeded):
        min_cover_cost(Hypergraph.from_sets(12, [range(12)]), 0.5, budget=100)


def test_min_cover_no_edges():
    with pytest.raises(NoEdges):
        min_cover_cost(Hypergraph.from_sets(3, []), 0.5)


@pytest.mark.parametrize(
    "edges, n, expected",
    [
        ([[0, 1]], 2, 0.7071067811865476),  # 2**-0.5
        ([[i] for i in range(8)], 8, 0.0625),  # 1/16
        ([[0]], 1, 0.5),
    ],
)
def test_q_exact_closed_forms(edges, n, expected):
    r = q_exact(Hypergraph.from_sets(n, edges))
    assert r.q == pytest.approx(expected, abs=1e-9)
    assert r.q <= expected + 1e-15 or abs(r.q - expected) <= 1e-9
    assert verify_certificate(r.witness, Hypergraph.from_sets(n, edges))


def test_q_exact_degenerate():
    with pytest.raises(DegenerateFamily):
        q_exact(Hypergraph.from_sets(2, [[], [0]]))
    with pytest.raises(NoEdges):
        q_exact(Hypergraph.from_sets(2, []))


def test_q_below_p_c(rng):
    for _ in range(25):
        h = random_hypergraph(rng, n_max=9)
        r = q_exact(h)
        assert verify_certificate(r.witness, h)
        assert r.q <= p_c_bisect(h) + 2e-9

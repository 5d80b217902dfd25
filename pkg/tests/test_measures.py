import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hypergraph
from oracles import brute_mu
from thresholdlab.errors import BadCardinality, DegenerateFamily, TooLargeForExact
from thresholdlab.hypergraph import Hypergraph, members
from thresholdlab.measures import (
    mu_exact,
    mu_mc,
    p_c_bisect,
    p_c_search,
    sample_uniform_m_subset,
    upset_size_profile,
    wilson_half_width,
)
from thresholdlab.rng import RandomSeed, trial_uniforms

SINGLETONS8 = Hypergraph.from_sets(8, [[i] for i in range(8)])


def test_mu_exact_small_cases():
    assert mu_exact(Hypergraph.from_sets(1, [[0]]), 0.3).point == pytest.approx(0.3, abs=1e-15)
    assert mu_exact(Hypergraph.from_sets(2, [[0], [1]]), 0.5).point == pytest.approx(0.75, abs=1e-15)


def test_mu_exact_singletons_matches_enumeration():
    # 1 - 0.9**8, checked against the set-based enumeration oracle
    frozen = 0.5695327899999999
    assert brute_mu(SINGLETONS8, 0.1) == pytest.approx(frozen, abs=1e-14)
    est = mu_exact(SINGLETONS8, 0.1)
    assert est.point == pytest.approx(frozen, abs=1e-14)
    assert est.exact and est.half_width == 0


def test_mu_exact_limit():
    with pytest.raises(TooLargeForExact):
        mu_exact(Hypergraph.from_sets(23, [[0]]), 0.5)


def test_mu_exact_agrees_with_oracle(rng):
    for _ in range(40):
        h = random_hypergraph(rng, n_max=9)
        p = float(rng.random())
        assert mu_exact(h, p).point == pytest.approx(brute_mu(h, p), abs=1e-12)


def test_mu_endpoints_and_monotone(rng):
    for _ in range(30):
        h = random_hypergraph(rng, n_max=12)
        assert mu_exact(h, 0.0).point == 0.0
        assert mu_exact(h, 1.0).point == 1.0
        ps = np.linspace(0, 1, 21)
        vals = [mu_exact(h, float(p)).point for p in ps]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_mu_mc_deterministic_extremes():
    h = Hypergraph.from_sets(1, [[0]])
    assert mu_mc(h, 1.0, 100, RandomSeed(1)).point == 1.0
    assert mu_mc(h, 0.0, 100, RandomSeed(1)).point == 0.0


def test_mu_mc_reproducible():
    h = Hypergraph.from_sets(5, [[0, 1], [2, 3, 4]])
    a = mu_mc(h, 0.4, 5000, RandomSeed(9, 2))
    b = mu_mc(h, 0.4, 5000, RandomSeed(9, 2))
    assert a == b
    assert a != mu_mc(h, 0.4, 5000, RandomSeed(10, 2))


def test_trial_uniforms_are_chunk_independent():
    seed = RandomSeed(77, 3)
    whole = trial_uniforms(seed, 0, 50, 7)
    parts = np.vstack([trial_uniforms(seed, 0, 13, 7), trial_uniforms(seed, 13, 37, 7)])
    assert np.array_equal(whole, parts)
    assert np.array_equal(trial_uniforms(seed, 20, 1, 7)[0], whole[20])


def test_mu_mc_interval_covers_exact():
    h = Hypergraph.from_sets(2, [[0], [1]])
    est = mu_mc(h, 0.5, 100_000, RandomSeed(123))
    assert est.trials == 100_000
    assert est.contains(0.75)


def test_wilson_matches_formula():
    z = 1.959963984540054
    n, k = 1000, 300
    ph = k / n
    center = (ph + z * z / (2 * n)) / (1 + z * z / n)
    hi = center + z / (1 + z * z / n) * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n))
    assert wilson_half_width(k, n) == pytest.approx(hi - center, rel=1e-12)


def test_sample_m_subset_edges():
    assert sample_uniform_m_subset(5, 0, RandomSeed(1)) == 0
    assert sample_uniform_m_subset(5, 5, RandomSeed(1)) == 0b11111
    with pytest.raises(BadCardinality):
        sample_uniform_m_subset(5, 6, RandomSeed(1))
    with pytest.raises(BadCardinality):
        sample_uniform_m_subset(5, -1, RandomSeed(1))


def test_sample_m_subset_uniform():
    trials = 60_000
    counts = {}
    for t in range(trials):
        s = sample_uniform_m_subset(4, 2, RandomSeed(5, t))
        assert s.bit_count() == 2
        counts[s] = counts.get(s, 0) + 1
    assert len(counts) == 6
    for c in counts.values():
        assert abs(c / trials - 1 / 6) <= 0.01
    from scipy.stats import chisquare

    assert chisquare(list(counts.values())).pvalue > 1e-3


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 20), st.data(), st.integers(0, 2**64 - 1))
def test_sample_m_subset_size_and_determinism(n, data, master):
    m = data.draw(st.integers(0, n))
    s = sample_uniform_m_subset(n, m, RandomSeed(master))
    assert s.bit_count() == m and s < (1 << n)
    assert s == sample_uniform_m_subset(n, m, RandomSeed(master))


def test_p_c_closed_forms():
    assert p_c_bisect(Hypergraph.from_sets(2, [[0, 1]])) == pytest.approx(2**-0.5, abs=1e-9)
    # 1 - 2**(-1/8)
    assert p_c_bisect(SINGLETONS8) == pytest.approx(0.08299595679532878, abs=1e-9)


def test_p_c_residual_within_tol(rng):
    for _ in range(20):
        h = random_hypergraph(rng)
        r = p_c_search(h, tol=1e-9)
        assert abs(mu_exact(h, r.p).point - 0.5) <= 1e-9
        assert not r.approximate


def test_p_c_matches_independent_bisection():
    h = Hypergraph.from_sets(6, [[0, 1], [2, 3, 4], [1, 5]])
    ref_lo, ref_hi = 0.0, 1.0
    for _ in range(60):
        mid = (ref_lo + ref_hi) / 2
        if brute_mu(h, mid) < 0.5:
            ref_lo = mid
        else:
            ref_hi = mid
    assert p_c_bisect(h) == pytest.approx(ref_lo, abs=1e-8)


def test_p_c_degenerate():
    with pytest.raises(DegenerateFamily):
        p_c_bisect(Hypergraph.from_sets(2, [[]]))
    with pytest.raises(DegenerateFamily):
        p_c_bisect(Hypergraph.from_sets(2, []))


def test_p_c_mc_mode():
    h = Hypergraph.from_sets(8, [[i] for i in range(8)])
    r = p_c_search(h, "mc", 1e-4, RandomSeed(3), trials=20_000)
    assert r.approximate
    assert r.estimate.contains(0.5)
    assert abs(r.p - 0.08299595679532878) < 0.01
    assert r == p_c_search(h, "mc", 1e-4, RandomSeed(3), trials=20_000)


def test_upset_profile_counts():
    # single 2-edge on 3 points: supersets are {0,1} and {0,1,2}
    prof = upset_size_profile(Hypergraph.from_sets(3, [[0, 1]]))
    assert prof.tolist() == [0, 0, 1, 1]

"""Slow reference implementations written with plain Python sets.

They share no code with the package beyond the Hypergraph container.
"""

import itertools
import math

from thresholdlab.hypergraph import Hypergraph, members


def as_sets(h: Hypergraph) -> list[frozenset]:
    return [frozenset(members(e)) for e in h.edges]


def all_subsets(n: int):
    for r in range(n + 1):
        for c in itertools.combinations(range(n), r):
            yield frozenset(c)


def brute_mu(h: Hypergraph, p: float) -> float:
    edges = as_sets(h)
    total = 0.0
    for a in all_subsets(h.n):
        if any(e <= a for e in edges):
            total += p ** len(a) * (1 - p) ** (h.n - len(a))
    return total


def brute_min_cover(h: Hypergraph, p: float) -> float:
    """Minimum cover cost by enumerating every assignment edge -> subset of that edge.

    An optimal cover may be taken to consist of sets each covering some edge, and
    each such set can be shrunk into that edge; so some assignment realises it.
    """
    edges = as_sets(h)
    choices = [[frozenset(c) for r in range(len(e) + 1) for c in itertools.combinations(sorted(e), r)] for e in edges]
    best = math.inf
    for pick in itertools.product(*choices):
        fam = set(pick)
        best = min(best, sum(p ** len(u) for u in fam))
    return best


def brute_fragment_size(h: Hypergraph, S: frozenset, W: frozenset) -> int:
    return min(len(e - W) for e in as_sets(h) if e <= S | W)


def brute_pc(k_profile_mu, lo=0.0, hi=1.0, iters=200):
    for _ in range(iters):
        mid = (lo + hi) / 2
        if k_profile_mu(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2

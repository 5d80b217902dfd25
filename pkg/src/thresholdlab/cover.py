"""Covers, p-smallness certificates, and the exact expectation-threshold."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable

from .errors import BudgetExceeded, DegenerateFamily, NoEdges
from .hypergraph import Hypergraph, canonical_key, canonical_sets, submasks, uncovered_edge

CANDIDATE_BUDGET = int(os.environ.get("THRESHOLDLAB_CANDIDATE_BUDGET", 2_000_000))
_REL_TIE = 1e-13


def cover_cost(sets: Iterable[int], p: float) -> float:
    # 0.0 ** 0 == 1.0: the empty set always costs 1
    return math.fsum(p ** s.bit_count() for s in sets)


def is_cover(sets: Iterable[int], h: Hypergraph) -> bool:
    return uncovered_edge(sets, h) is None


@dataclass(frozen=True)
class CoverCertificate:
    sets: tuple[int, ...]
    p: float

    def __post_init__(self):
        object.__setattr__(self, "sets", canonical_sets(self.sets))

    @property
    def cost(self) -> float:
        return cover_cost(self.sets, self.p)


def certificate_status(cert: CoverCertificate, h: Hypergraph) -> tuple[str, int | None]:
    """``("VALID", None)``, ``("NOT_A_COVER", edge)`` or ``("COST_EXCEEDS_HALF", None)``."""
    missed = uncovered_edge(cert.sets, h)
    if missed is not None:
        return "NOT_A_COVER", missed
    if cert.cost > 0.5:
        return "COST_EXCEEDS_HALF", None
    return "VALID", None


def verify_certificate(cert: CoverCertificate, h: Hypergraph) -> bool:
    return certificate_status(cert, h)[0] == "VALID"


def _family_key(cost: float, family: tuple[int, ...]):
    return (len(family), [canonical_key(s) for s in family])


class _Search:
    """Depth-first branch-and-bound over covers built from subsets of edges.

    Any set covering an edge S can be shrunk to its intersection with S without
    raising the cost, so the candidates are exactly the subsets of edges.
    """

    def __init__(self, h: Hypergraph, p: float, budget: int):
        self.p = p
        edges = h.edges
        self.full = (1 << len(edges)) - 1
        seen: dict[int, int] = {}
        for e in edges:
            for u in submasks(e):
                if u not in seen:
                    if len(seen) >= budget:
                        raise BudgetExceeded(f"more than {budget} candidate cover sets")
                    seen[u] = 0
        for u in seen:
            cov = 0
            for j, e in enumerate(edges):
                if u & ~e == 0:
                    cov |= 1 << j
            seen[u] = cov
        self.cover_of = seen
        self.weight = {u: p ** u.bit_count() for u in seen}
        # per edge: candidates inside it, cheapest first, canonical order on ties
        self.inside = [
            sorted(submasks(e), key=lambda u: (self.weight[u], canonical_key(u))) for e in edges
        ]
        self.best_cost = math.inf
        self.best: tuple[int, ...] = ()

    def lower_bound(self, uncovered: int) -> float:
        total = 0.0
        m = uncovered
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            total += min(self.weight[u] / (self.cover_of[u] & uncovered).bit_count() for u in self.inside[j])
        return total

    def offer(self, cost: float, family: tuple[int, ...]):
        family = canonical_sets(family)
        slack = _REL_TIE * max(1.0, self.best_cost if self.best_cost < math.inf else 1.0)
        if cost < self.best_cost - slack:
            self.best_cost, self.best = cost, family
        elif cost <= self.best_cost + slack and _family_key(cost, family) < _family_key(self.best_cost, self.best):
            self.best_cost, self.best = min(cost, self.best_cost), family

    def run(self, uncovered: int, cost: float, chosen: list[int]):
        if uncovered == 0:
            self.offer(cost, tuple(chosen))
            return
        slack = _REL_TIE * max(1.0, self.best_cost)
        if cost + self.lower_bound(uncovered) > self.best_cost + slack:
            return
        # branch on the uncovered edge with the fewest candidates
        m, pick, fewest = uncovered, -1, math.inf
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            if len(self.inside[j]) < fewest:
                pick, fewest = j, len(self.inside[j])
        for u in self.inside[pick]:
            if u in chosen:
                continue
            chosen.append(u)
            self.run(uncovered & ~self.cover_of[u], cost + self.weight[u], chosen)
            chosen.pop()


def min_cover_cost(h: Hypergraph, p: float, budget: int = CANDIDATE_BUDGET) -> tuple[float, tuple[int, ...]]:
    """Cheapest cover of ``h`` at ``p`` and one optimal family.

    Ties are broken by fewest sets, then lexicographically in canonical order.
    """
    if not h.edges:
        raise NoEdges("hypergraph has no edges")
    search = _Search(h, p, budget)
    search.offer(cover_cost(h.edges, p), h.edges)
    search.offer(1.0, (0,))
    search.run(search.full, 0.0, [])
    return cover_cost(search.best, p), search.best


@dataclass(frozen=True)
class QResult:
    q: float
    witness: CoverCertificate


def q_exact(h: Hypergraph, tol: float = 1e-9, budget: int = CANDIDATE_BUDGET) -> QResult:
    """Largest p (to within ``tol``, from below) at which ``h`` is p-small."""
    if not h.edges:
        raise NoEdges("hypergraph has no edges")
    if 0 in h.edges:
        raise DegenerateFamily("the empty set is an edge, so no cover is cheaper than 1")
    top, _ = min_cover_cost(h, 1.0, budget)
    # every edge needs a nonempty candidate of cost 1 at p = 1
    assert top > 0.5
    lo, hi = 0.0, 1.0
    witness = h.edges
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cost, family = min_cover_cost(h, mid, budget)
        if cost <= 0.5:
            lo, witness = mid, family
        else:
            hi = mid
    return QResult(lo, CoverCertificate(witness, lo))

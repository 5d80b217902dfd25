"""Product measure of an upset: exact enumeration, Monte Carlo, and threshold search."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import BadCardinality, DegenerateFamily, TooLargeForExact
from .hypergraph import Hypergraph
from .rng import RandomSeed, generator, trial_uniforms

EXACT_LIMIT = int(os.environ.get("THRESHOLDLAB_EXACT_LIMIT", 22))
MC_TRIALS = 100_000
Z95 = 1.959963984540054
_CHUNK = 1 << 15


@dataclass(frozen=True)
class MeasureEstimate:
    point: float
    half_width: float = 0.0
    trials: int = 0

    @property
    def exact(self) -> bool:
        return self.trials == 0

    def contains(self, value: float) -> bool:
        return abs(value - self.point) <= self.half_width


def wilson_half_width(hits: int, trials: int, z: float = Z95) -> float:
    phat = hits / trials
    z2 = z * z
    return z / (1 + z2 / trials) * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))


def upset_size_profile(h: Hypergraph, limit: int = EXACT_LIMIT) -> np.ndarray:
    """``counts[k]`` = number of k-subsets of the ground set lying in the upset of ``h``."""
    if h.n > limit:
        raise TooLargeForExact(f"n={h.n} exceeds the exact-enumeration limit {limit}")
    masks = np.arange(1 << h.n, dtype=np.uint64)
    hit = np.zeros(masks.shape, dtype=bool)
    for e in h.edges:
        ue = np.uint64(e)
        hit |= (masks & ue) == ue
    sizes = np.bitwise_count(masks[hit])
    return np.bincount(sizes, minlength=h.n + 1)


def mu_from_profile(counts: np.ndarray, p: float) -> float:
    n = len(counts) - 1
    # python floats give 0.0 ** 0 == 1.0, which is the convention needed at p in {0, 1}
    return math.fsum(int(c) * p**k * (1 - p) ** (n - k) for k, c in enumerate(counts) if c)


def mu_exact(h: Hypergraph, p: float, limit: int = EXACT_LIMIT) -> MeasureEstimate:
    _check_probability(p)
    return MeasureEstimate(min(1.0, mu_from_profile(upset_size_profile(h, limit), p)))


def _hits_in_chunk(h: Hypergraph, p: float, u: np.ndarray) -> int:
    x = u < p
    weights = np.left_shift(np.uint64(1), np.arange(h.n, dtype=np.uint64))
    sample = (x.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    hit = np.zeros(len(sample), dtype=bool)
    for e in h.edges:
        ue = np.uint64(e)
        hit |= (sample & ue) == ue
    return int(hit.sum())


def mu_mc(h: Hypergraph, p: float, trials: int, seed: RandomSeed) -> MeasureEstimate:
    """Estimate the measure from ``trials`` independent draws of the random set X_p.

    Trial ``t`` uses uniforms at counter offset ``t`` of ``seed``'s stream, so the
    hit count does not depend on the chunking below.
    """
    _check_probability(p)
    if trials < 1:
        raise ValueError("trials must be positive")
    hits = 0
    for start in range(0, trials, _CHUNK):
        count = min(_CHUNK, trials - start)
        hits += _hits_in_chunk(h, p, trial_uniforms(seed, start, count, h.n))
    return MeasureEstimate(hits / trials, wilson_half_width(hits, trials), trials)


def sample_uniform_m_subset(n: int, m: int, seed: RandomSeed) -> int:
    if m < 0 or m > n:
        raise BadCardinality(f"cannot draw a {m}-subset from {n} elements")
    picked = generator(seed).choice(n, size=m, replace=False)
    mask = 0
    for i in picked:
        mask |= 1 << int(i)
    return mask


@dataclass(frozen=True)
class ThresholdResult:
    p: float
    estimate: MeasureEstimate
    approximate: bool
    probes: int

    @property
    def residual(self) -> float:
        return abs(self.estimate.point - 0.5)


def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")


def _check_nondegenerate(h: Hypergraph):
    if not h.edges:
        raise DegenerateFamily("empty edge list: the upset is empty")
    if 0 in h.edges:
        raise DegenerateFamily("the empty set is an edge: the upset is everything")


def p_c_search(
    h: Hypergraph,
    mode: str = "exact",
    tol: float = 1e-9,
    seed: RandomSeed | None = None,
    trials: int = MC_TRIALS,
    limit: int = EXACT_LIMIT,
) -> ThresholdResult:
    """Bisect for the p at which the upset has measure 1/2."""
    _check_nondegenerate(h)
    lo, hi = 0.0, 1.0
    if mode == "exact":
        counts = upset_size_profile(h, limit)
        for probe in range(1, 400):
            mid = 0.5 * (lo + hi)
            mu = mu_from_profile(counts, mid)
            if hi - lo <= tol and abs(mu - 0.5) <= tol:
                return ThresholdResult(mid, MeasureEstimate(mu), False, probe)
            if mid in (lo, hi):
                break
            if mu < 0.5:
                lo = mid
            else:
                hi = mid
        mid = 0.5 * (lo + hi)
        return ThresholdResult(mid, MeasureEstimate(mu_from_profile(counts, mid)), True, probe)
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if seed is None:
        raise ValueError("mc mode needs a seed")
    # Same seed at every probe: the hit indicator u < p is monotone in p for fixed u.
    probe = 0
    while True:
        probe += 1
        mid = 0.5 * (lo + hi)
        est = mu_mc(h, mid, trials, seed)
        if est.contains(0.5) or hi - lo <= tol:
            return ThresholdResult(mid, est, True, probe)
        if est.point < 0.5:
            lo = mid
        else:
            hi = mid


def p_c_bisect(h: Hypergraph, mode: str = "exact", tol: float = 1e-9, seed: RandomSeed | None = None, **kw) -> float:
    return p_c_search(h, mode, tol, seed, **kw).p

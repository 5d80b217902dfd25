"""Minimum fragments and the iterated random cover-construction process.

Each round draws a uniformly random set W from the still-unused ground
elements, replaces every edge S by a minimum (S, W)-fragment, keeps the large
fragments as cover sets, and passes the small ones on as the next hypergraph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .cover import cover_cost, is_cover
from .errors import BadEll, BudgetExceeded, DegenerateInput, InsufficientGround, NotAnEdge
from .hypergraph import Hypergraph, canonical_sets, in_upset, members
from .logspace import NEG_INF, log_binomial, log_power_sum, logsumexp, safe_exp
from .measures import Z95
from .rng import RandomSeed, generator

THEOREM_MIN_L = 1024
SHRINK = 0.9
# slack for comparing an integer fragment size against a real threshold like .9**i * ell
_EPS = 1e-9
ENUMERATION_BUDGET = 10**7


@dataclass(frozen=True)
class FragmentResult:
    T: int
    t: int
    witness: int


def _min_fragment_index(edges: Sequence[int], S: int, W: int) -> int:
    # edges are in canonical order, so the first minimum is the canonical tie-break
    SW = S | W
    notW = ~W
    best_j, best_t = -1, math.inf
    for j, e in enumerate(edges):
        if e & ~SW == 0:
            t = (e & notW).bit_count()
            if t < best_t:
                best_j, best_t = j, t
                if t == 0:
                    break
    return best_j


def min_fragment(h: Hypergraph, S: int, W: int) -> FragmentResult:
    if S not in h.edges:
        raise NotAnEdge(f"{members(S)} is not an edge")
    witness = h.edges[_min_fragment_index(h.edges, S, W)]
    T = witness & ~W
    return FragmentResult(T, T.bit_count(), witness)


def all_fragments(h: Hypergraph, W: int) -> list[int]:
    """Minimum fragment ``T(S, W)`` for every edge S, in edge order."""
    return [h.edges[_min_fragment_index(h.edges, S, W)] & ~W for S in h.edges]


@dataclass(frozen=True)
class RoundSplit:
    good: tuple[int, ...]
    cover: tuple[int, ...]
    leftover: Hypergraph


def split_round(h: Hypergraph, W: int, threshold: float) -> RoundSplit:
    """Split ``h`` into edges with large minimum fragments and the leftover hypergraph."""
    good, cover, rest = [], [], []
    for j, (S, T) in enumerate(zip(h.edges, all_fragments(h, W))):
        if T.bit_count() >= threshold - _EPS:
            if T & ~S:
                raise AssertionError(f"fragment {members(T)} not inside its edge {members(S)}")
            good.append(j)
            cover.append(T)
        else:
            rest.append(T)
    return RoundSplit(tuple(good), canonical_sets(cover), Hypergraph(h.n, canonical_sets(rest)))


def check_success1(cover: Sequence[int], p: float, L_i: float, ell_i: float) -> bool:
    return log_power_sum(p, (u.bit_count() for u in cover)) < success1_log_bound(L_i, ell_i)


def success1_log_bound(L_i: float, ell_i: float) -> float:
    """Natural log of ``L_i ** (-.5 * ell_i)``."""
    return -0.5 * ell_i * math.log(L_i)


def draw_size(L: float, p: float, n: int) -> int:
    # ceil with a relative guard so 1024 * (1 / (1024 * 14)) * 14 rounds to 1
    x = L * p * n
    return math.ceil(x * (1 - 1e-12))


@dataclass(frozen=True)
class ScheduleParams:
    L: float
    ell: int
    p: float
    n: int
    gamma: int
    ells: tuple[float, ...]  # ells[i] = .9**i * ell for i = 0..gamma
    Ls: tuple[float, ...]  # Ls[i-1] = L_i for i = 1..gamma
    ws: tuple[int, ...]  # ws[i-1] = w_i
    exploratory: bool = False

    def ell_at(self, i: int) -> float:
        return self.ells[i]

    def L_at(self, i: int) -> float:
        return self.Ls[i - 1]

    def w_at(self, i: int) -> int:
        return self.ws[i - 1]

    @property
    def total_w(self) -> int:
        return sum(self.ws)

    @property
    def implied_C(self) -> float | None:
        """C with total_w = C * L * p * log2(ell) * n; None when log2(ell) is 0."""
        denom = self.L * self.p * math.log2(self.ell) * self.n
        return self.total_w / denom if denom > 0 else None

    @property
    def in_theorem_regime(self) -> bool:
        return self.L >= THEOREM_MIN_L and self.ell >= 2


def gamma_for(ell: float) -> int:
    return math.floor(math.log(ell) / -math.log(SHRINK)) + 1


def build_schedule(L: float, ell: int, p: float, n: int, exploratory: bool = False) -> ScheduleParams:
    if ell < 1 or (ell < 2 and not exploratory):
        raise BadEll(f"ell={ell} must be at least 2 (1 allowed in exploratory mode)")
    if L < THEOREM_MIN_L and not exploratory:
        raise ValueError(f"L={L} is below {THEOREM_MIN_L}; pass exploratory=True to allow it")
    if L < 1:
        raise ValueError("L must be at least 1")
    if not 0 < p < 1:
        raise ValueError(f"p={p} must lie strictly between 0 and 1")
    log_ratio = math.log(ell) / -math.log(SHRINK)
    gamma = math.floor(log_ratio) + 1
    ells = tuple(SHRINK**i * ell for i in range(gamma + 1))
    boundary = gamma - math.sqrt(log_ratio)
    # log2(1) = 0 would zero out L_i; ell = 1 only occurs in exploratory mode
    boost = math.sqrt(math.log2(ell)) if ell >= 2 else 1.0
    Ls = tuple(L if i < boundary else L * boost for i in range(1, gamma + 1))
    ws = tuple(draw_size(Li, p, n) for Li in Ls)
    if sum(ws) > n:
        raise InsufficientGround(f"the rounds need {sum(ws)} ground elements but n={n}")
    return ScheduleParams(L, ell, p, n, gamma, ells, Ls, ws, exploratory)


@dataclass(frozen=True)
class RoundRecord:
    i: int
    W: int
    threshold: float
    good: tuple[int, ...]
    cover: tuple[int, ...]
    leftover: Hypergraph
    cost: float
    log_cost: float
    success1: bool
    success2: bool


@dataclass(frozen=True)
class ProcessTranscript:
    hypergraph: Hypergraph
    schedule: ScheduleParams
    seed: RandomSeed | None
    rounds: tuple[RoundRecord, ...]
    i_max: int
    terminated_successfully: bool
    assembled_cover: tuple[int, ...]
    W_union: int

    def cost_bound_log(self) -> float:
        """Log of the sum over rounds of ``L_i ** (-.5 * ell_i)``."""
        s = self.schedule
        return logsumexp(success1_log_bound(s.L_at(i), s.ell_at(i)) for i in range(1, self.i_max + 1))


def _play_round(h: Hypergraph, W: int, i: int, schedule: ScheduleParams) -> RoundRecord:
    threshold = schedule.ell_at(i)
    split = split_round(h, W, threshold)
    log_cost = log_power_sum(schedule.p, (u.bit_count() for u in split.cover))
    return RoundRecord(
        i=i,
        W=W,
        threshold=threshold,
        good=split.good,
        cover=split.cover,
        leftover=split.leftover,
        cost=cover_cost(split.cover, schedule.p),
        log_cost=log_cost,
        success1=log_cost < success1_log_bound(schedule.L_at(i), threshold),
        success2=0 not in split.leftover.edges,
    )


def _finished(h: Hypergraph) -> bool:
    return all(e == 0 for e in h.edges)


def _assemble(h: Hypergraph, schedule: ScheduleParams, seed, rounds: list[RoundRecord]) -> ProcessTranscript:
    W_union = 0
    for r in rounds:
        W_union |= r.W
    return ProcessTranscript(
        hypergraph=h,
        schedule=schedule,
        seed=seed,
        rounds=tuple(rounds),
        i_max=len(rounds),
        terminated_successfully=all(r.success1 and r.success2 for r in rounds),
        assembled_cover=canonical_sets(u for r in rounds for u in r.cover),
        W_union=W_union,
    )


def run_process(h: Hypergraph, schedule: ScheduleParams, seed: RandomSeed) -> ProcessTranscript:
    if not h.edges:
        raise DegenerateInput("hypergraph has no edges")
    if 0 in h.edges:
        raise DegenerateInput("the empty set is an edge of the starting hypergraph")
    if schedule.n != h.n or schedule.ell < h.ell_bound:
        raise ValueError("schedule was not built for this hypergraph")
    rng = generator(seed)
    unused = np.arange(h.n)
    current = h
    rounds: list[RoundRecord] = []
    for i in range(1, schedule.gamma + 1):
        picked = rng.choice(unused, size=schedule.w_at(i), replace=False)
        unused = np.setdiff1d(unused, picked, assume_unique=True)
        W = 0
        for x in picked:
            W |= 1 << int(x)
        record = _play_round(current, W, i, schedule)
        rounds.append(record)
        current = record.leftover
        if _finished(current):
            break
    return _assemble(h, schedule, seed, rounds)


def verify_transcript(tr: ProcessTranscript) -> list[str]:
    """Re-derive every round from its recorded W and list violated invariants.

    Uses only the recorded data; the random generator is never consulted.
    """
    problems: list[str] = []
    s = tr.schedule
    h = tr.hypergraph
    try:
        rebuilt = build_schedule(s.L, s.ell, s.p, s.n, s.exploratory)
    except Exception as exc:  # noqa: BLE001 - any failure is a violation to report
        return [f"schedule cannot be rebuilt: {exc}"]
    if rebuilt != s:
        problems.append("schedule differs from its recomputation")
    if not 0 < s.ell_at(s.gamma) < 1:
        problems.append("ell_gamma outside (0, 1)")
    if tr.i_max != len(tr.rounds) or tr.i_max > s.gamma:
        problems.append(f"i_max={tr.i_max} inconsistent with {len(tr.rounds)} rounds and gamma={s.gamma}")

    current, used, W_union = h, 0, 0
    for k, r in enumerate(tr.rounds, start=1):
        if r.i != k:
            problems.append(f"round {k} recorded as {r.i}")
        if r.W & used:
            problems.append(f"round {k}: W overlaps earlier draws")
        if r.W & ~h.ground_mask:
            problems.append(f"round {k}: W leaves the ground set")
        if r.W.bit_count() != s.w_at(k):
            problems.append(f"round {k}: |W|={r.W.bit_count()} but w_i={s.w_at(k)}")
        used |= r.W
        W_union |= r.W
        expect = _play_round(current, r.W, k, s)
        if expect != r:
            problems.append(f"round {k}: recorded data differ from recomputation")
        if any(e.bit_count() > s.ell_at(k) + _EPS for e in r.leftover.edges):
            problems.append(f"round {k}: leftover exceeds the size bound {s.ell_at(k)}")
        if not is_cover(r.cover + r.leftover.edges, current):
            problems.append(f"round {k}: cover plus leftover does not cover the previous hypergraph")
        for T in set(all_fragments(current, r.W)):
            for S_hat in current.edges:
                if S_hat & ~(T | r.W) == 0 and T & ~S_hat:
                    problems.append(f"round {k}: fragment {members(T)} not inside {members(S_hat)}")
        if not r.success2 and not in_upset(h, W_union):
            problems.append(f"round {k}: empty fragment but the drawn sets contain no edge")
        finished = _finished(r.leftover)
        if finished != (k == len(tr.rounds)):
            problems.append(f"round {k}: termination point recorded incorrectly")
        current = r.leftover

    again = _assemble(h, s, tr.seed, list(tr.rounds))
    if again != tr:
        problems.append("transcript summary fields differ from recomputation")
    if tr.terminated_successfully:
        if not is_cover(tr.assembled_cover, h):
            problems.append("successful run but assembled cover misses an edge")
        total = log_power_sum(s.p, (u.bit_count() for u in tr.assembled_cover))
        if total > tr.cost_bound_log() + 1e-12:
            problems.append("successful run but cover cost exceeds the summed round bounds")
    return problems


@dataclass(frozen=True)
class Lemma31Row:
    m: int
    pairs: int  # number of (W, T(S, W)) pairs with t(S, W) = m
    log_lhs: float
    log_rhs_step: float

    @property
    def lhs(self) -> float:
        return safe_exp(self.log_lhs)

    @property
    def rhs_step(self) -> float:
        return safe_exp(self.log_rhs_step)

    @property
    def holds(self) -> bool:
        return self.log_lhs <= self.log_rhs_step + 1e-12


@dataclass(frozen=True)
class Lemma31Table:
    n: int
    w: int
    ell: int
    p: float
    L: float
    rows: tuple[Lemma31Row, ...]
    log_rhs_total: float

    @property
    def good_threshold(self) -> float:
        return SHRINK * self.ell

    def good_rows(self) -> list[Lemma31Row]:
        return [r for r in self.rows if r.m >= self.good_threshold - _EPS]

    @property
    def log_lhs_total(self) -> float:
        return logsumexp(r.log_lhs for r in self.good_rows())

    @property
    def rhs_total(self) -> float:
        return safe_exp(self.log_rhs_total)

    @property
    def total_holds(self) -> bool:
        return self.log_lhs_total <= self.log_rhs_total + 1e-12

    @property
    def mean_cost(self) -> float:
        """Exact average over W of the good-set cover cost."""
        return safe_exp(self.log_lhs_total - log_binomial(self.n, self.w))


def lemma31_table(h: Hypergraph, p: float, L: float, budget: int = ENUMERATION_BUDGET, ell: int | None = None) -> Lemma31Table:
    """Enumerate every W of size ceil(L p n) and tabulate the fragment-counting bound per size m."""
    ell = h.ell_bound if ell is None else ell
    n = h.n
    w = draw_size(L, p, n)
    if w > n:
        raise BudgetExceeded(f"w={w} exceeds n={n}")
    if math.comb(n, w) > budget:
        raise BudgetExceeded(f"C({n},{w}) = {math.comb(n, w)} exceeds the enumeration budget {budget}")
    pairs = [0] * (ell + 1)
    for picked in combinations(range(n), w):
        W = 0
        for x in picked:
            W |= 1 << x
        for T in set(all_fragments(h, W)):
            pairs[T.bit_count()] += 1
    log_nw = log_binomial(n, w)
    rows = []
    for m, c in enumerate(pairs):
        log_lhs = (math.log(c) + (m * math.log(p) if m else 0.0)) if c else NEG_INF
        rows.append(Lemma31Row(m, c, log_lhs, log_nw - m * math.log(L) + ell * math.log(2)))
    return Lemma31Table(n, w, ell, p, L, tuple(rows), log_nw - 0.6 * ell * math.log(L))


def lemma31_bruteforce(h: Hypergraph, p: float, L: float, m: int, budget: int = ENUMERATION_BUDGET) -> tuple[float, float, float]:
    """``(lhs, rhs_step, rhs_total)`` for fragment size ``m``; raises if the step bound fails."""
    table = lemma31_table(h, p, L, budget)
    if m < len(table.rows):
        row = table.rows[m]
    else:
        row = Lemma31Row(m, 0, NEG_INF, log_binomial(table.n, table.w) - m * math.log(L) + table.ell * math.log(2))
    if not row.holds:
        raise AssertionError(f"m={m}: lhs {row.lhs} exceeds the step bound {row.rhs_step}")
    return row.lhs, row.rhs_step, table.rhs_total


@dataclass(frozen=True)
class Lemma31Sample:
    trials: int
    w: int
    fail_rate: float
    mean_cost: float
    mean_half_width: float
    fail_bound: float  # L ** (-.1 ell)
    mean_bound: float  # L ** (-.6 ell)
    in_theorem_regime: bool


def good_cover_cost(h: Hypergraph, W: int, p: float, ell: float) -> float:
    cover = {T for T in all_fragments(h, W) if T.bit_count() >= SHRINK * ell - _EPS}
    return cover_cost(cover, p)


def empirical_lemma31(h: Hypergraph, p: float, L: float, trials: int, seed: RandomSeed, ell: int | None = None) -> Lemma31Sample:
    """Sample W uniformly ``trials`` times; trial t draws from stream t of ``seed.master``."""
    if trials < 1:
        raise ValueError("trials must be positive")
    ell = h.ell_bound if ell is None else ell
    w = draw_size(L, p, h.n)
    if w > h.n:
        raise InsufficientGround(f"w={w} exceeds n={h.n}")
    log_fail = -0.5 * ell * math.log(L)
    costs = np.empty(trials)
    fails = 0
    for t in range(trials):
        picked = generator(seed.child(t)).choice(h.n, size=w, replace=False)
        W = 0
        for x in picked:
            W |= 1 << int(x)
        cover = {T for T in all_fragments(h, W) if T.bit_count() >= SHRINK * ell - _EPS}
        costs[t] = cover_cost(cover, p)
        if log_power_sum(p, (u.bit_count() for u in cover)) >= log_fail:
            fails += 1
    sd = float(costs.std(ddof=1)) if trials > 1 else 0.0
    return Lemma31Sample(
        trials=trials,
        w=w,
        fail_rate=fails / trials,
        mean_cost=float(costs.mean()),
        mean_half_width=Z95 * sd / math.sqrt(trials),
        fail_bound=L ** (-0.1 * ell),
        mean_bound=L ** (-0.6 * ell),
        in_theorem_regime=L >= THEOREM_MIN_L,
    )

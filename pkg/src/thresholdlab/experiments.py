"""Named instance families and the q-versus-p_c comparison harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .cover import cover_cost, q_exact
from .errors import BadEll, BudgetExceeded, InsufficientGround, MalformedInput, TooLarge
from .fragments import build_schedule, run_process
from .hypergraph import MAX_N, Hypergraph, largest_minimal_element
from .measures import EXACT_LIMIT, p_c_search
from .rng import RandomSeed, generator

MAX_EDGES = 10**6

FAMILIES = {
    "single_edge": ("k",),
    "singletons": ("n",),
    "random_k_uniform": ("n", "k", "count", "seed"),
    "triangles": ("v",),
    "perfect_matchings": ("v",),
}


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    params: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, family: str, **params: int) -> "InstanceSpec":
        spec = cls(family, tuple(params.items()))
        spec.check()
        return spec

    @classmethod
    def parse(cls, text: str) -> "InstanceSpec":
        """Parse ``family:key=value,key=value`` (e.g. ``triangles:v=5``)."""
        family, _, rest = text.strip().partition(":")
        params = []
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq:
                raise MalformedInput(f"parameter {item!r} is not key=value")
            try:
                params.append((key.strip(), int(value)))
            except ValueError:
                raise MalformedInput(f"parameter {key!r} needs an integer, got {value!r}") from None
        spec = cls(family, tuple(params))
        spec.check()
        return spec

    def check(self):
        if self.family not in FAMILIES:
            raise MalformedInput(f"unknown family {self.family!r}")
        if sorted(k for k, _ in self.params) != sorted(FAMILIES[self.family]):
            raise MalformedInput(f"{self.family} takes parameters {', '.join(FAMILIES[self.family])}")

    @property
    def kwargs(self) -> dict[str, int]:
        return dict(self.params)

    def __str__(self):
        args = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family}:{args}"


def graph_slots(v: int) -> dict[tuple[int, int], int]:
    """Index the edges of the complete graph on ``v`` vertices lexicographically."""
    return {pair: i for i, pair in enumerate(combinations(range(v), 2))}


def _perfect_matchings(vertices: tuple[int, ...]):
    if not vertices:
        yield []
        return
    a = vertices[0]
    for j in range(1, len(vertices)):
        b = vertices[j]
        rest = vertices[1:j] + vertices[j + 1 :]
        for m in _perfect_matchings(rest):
            yield [(a, b)] + m


def _check_size(n: int, edge_count: int):
    if n > MAX_N:
        raise TooLarge(f"ground set of {n} elements exceeds {MAX_N}")
    if edge_count > MAX_EDGES:
        raise TooLarge(f"{edge_count} edges exceeds {MAX_EDGES}")


def generate(spec: InstanceSpec) -> Hypergraph:
    kw = spec.kwargs
    if spec.family == "single_edge":
        k = kw["k"]
        if k < 1:
            raise MalformedInput("single_edge needs k >= 1")
        _check_size(k, 1)
        return Hypergraph.from_sets(k, [range(k)])
    if spec.family == "singletons":
        n = kw["n"]
        if n < 1:
            raise MalformedInput("singletons needs n >= 1")
        _check_size(n, n)
        return Hypergraph.from_sets(n, [[i] for i in range(n)])
    if spec.family == "random_k_uniform":
        n, k, count = kw["n"], kw["k"], kw["count"]
        if not (n >= 1 and 0 <= k <= n and count >= 1):
            raise MalformedInput("random_k_uniform needs n >= 1, 0 <= k <= n, count >= 1")
        if count > math.comb(n, k):
            raise MalformedInput(f"only {math.comb(n, k)} distinct {k}-subsets exist")
        _check_size(n, count)
        rng = generator(RandomSeed(kw["seed"]))
        edges: dict[int, None] = {}
        while len(edges) < count:
            mask = 0
            for x in rng.choice(n, size=k, replace=False):
                mask |= 1 << int(x)
            edges[mask] = None
        return Hypergraph.from_masks(n, edges)
    if spec.family == "triangles":
        v = kw["v"]
        if v < 3:
            raise MalformedInput("triangles needs v >= 3")
        slots = graph_slots(v)
        _check_size(len(slots), math.comb(v, 3))
        tri = [[slots[a, b], slots[a, c], slots[b, c]] for a, b, c in combinations(range(v), 3)]
        return Hypergraph.from_sets(len(slots), tri)
    if spec.family == "perfect_matchings":
        v = kw["v"]
        if v < 2 or v % 2:
            raise MalformedInput("perfect_matchings needs an even v >= 2")
        slots = graph_slots(v)
        _check_size(len(slots), math.prod(range(v - 1, 0, -2)))
        pms = [[slots[e] for e in m] for m in _perfect_matchings(tuple(range(v)))]
        return Hypergraph.from_sets(len(slots), pms)
    raise MalformedInput(f"unknown family {spec.family!r}")


DEFAULT_CORPUS = (
    [InstanceSpec.of("single_edge", k=k) for k in range(1, 6)]
    + [InstanceSpec.of("singletons", n=n) for n in range(2, 11)]
    + [InstanceSpec.of("triangles", v=4), InstanceSpec.of("triangles", v=5)]
    + [InstanceSpec.of("perfect_matchings", v=4), InstanceSpec.of("perfect_matchings", v=6)]
)


@dataclass(frozen=True)
class KKConfig:
    tol: float = 1e-9
    seeds: int = 20
    master_seed: int = 0
    L: float = 1024
    exploratory: bool = False
    extra_ps: tuple[float, ...] = ()
    mc_trials: int = 100_000


@dataclass(frozen=True)
class ProcessStats:
    p: float
    runs: int
    success_rate: float | None
    mean_cost: float | None
    note: str = ""


@dataclass(frozen=True)
class KKReport:
    instance: InstanceSpec
    n: int
    ell: int
    q: float | None
    p_c: float
    p_c_exact: bool
    seeds: int
    process_stats: tuple[ProcessStats, ...] = field(default=())

    @property
    def ratio(self) -> float | None:
        """p_c / (q log2 ell); undefined for ell = 1 or when q is unavailable."""
        if self.q is None or self.ell < 2 or self.q == 0:
            return None
        return self.p_c / (self.q * math.log2(self.ell))

    @property
    def headline(self) -> ProcessStats | None:
        return self.process_stats[0] if self.process_stats else None


def process_stats(h: Hypergraph, p: float, config: KKConfig) -> ProcessStats:
    try:
        schedule = build_schedule(config.L, max(h.ell_bound, 1), p, h.n, config.exploratory)
    except (InsufficientGround, BadEll, ValueError) as exc:
        return ProcessStats(p, 0, None, None, f"no schedule: {exc}")
    successes, costs = 0, []
    for s in range(config.seeds):
        tr = run_process(h, schedule, RandomSeed(config.master_seed, s))
        successes += tr.terminated_successfully
        costs.append(cover_cost(tr.assembled_cover, p))
    return ProcessStats(p, config.seeds, successes / config.seeds, math.fsum(costs) / config.seeds)


def run_kk_report(spec: InstanceSpec, seeds: int | None = None, config: KKConfig | None = None) -> KKReport:
    config = config or KKConfig()
    if seeds is not None:
        config = KKConfig(**{**config.__dict__, "seeds": seeds})
    h = generate(spec)
    ell = largest_minimal_element(h)
    try:
        q = q_exact(h, config.tol).q
    except BudgetExceeded:
        q = None
    if h.n <= EXACT_LIMIT:
        pc = p_c_search(h, "exact", config.tol)
    else:
        pc = p_c_search(h, "mc", 1e-4, RandomSeed(config.master_seed), trials=config.mc_trials)
    if q is not None and pc.approximate is False and q > pc.p + 2 * config.tol:
        raise AssertionError(f"{spec}: q={q} exceeds p_c={pc.p}")
    ps = ([q] if q is not None and 0 < q < 1 else []) + list(config.extra_ps)
    stats = tuple(process_stats(h, p, config) for p in ps)
    return KKReport(spec, h.n, ell, q, pc.p, not pc.approximate, config.seeds, stats)

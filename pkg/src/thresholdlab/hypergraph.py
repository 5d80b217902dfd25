"""Ground sets, bit-indexed subsets and explicit hypergraphs.

A subset of the ground set ``{0, ..., n-1}`` is an ``int`` whose bit ``i`` is set
when element ``i`` belongs to it.  All set algebra downstream is done with
``&``, ``|`` and ``~`` on these masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EdgeOutOfRange, EmptyGround, NoEdges

MAX_N = 63


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 0:
            raise EdgeOutOfRange(f"negative element {e}")
        mask |= 1 << e
    return mask


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def canonical_key(mask: int) -> tuple[int, list[int]]:
    """Sort key: size first, then the ascending element list."""
    return (mask.bit_count(), members(mask))


def canonical_sets(masks: Iterable[int]) -> tuple[int, ...]:
    """Deduplicate and sort a family of subsets into canonical order."""
    return tuple(sorted(set(masks), key=canonical_key))


def submasks(mask: int):
    """Yield every subset of ``mask``, including ``mask`` itself and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Hypergraph:
    """An explicit hypergraph on ``{0, ..., n-1}``.

    Construct through :meth:`from_sets` or :func:`validate`; the constructor
    itself does not canonicalize.  ``edges`` holds bit masks in canonical order.
    """

    n: int
    edges: tuple[int, ...]

    @classmethod
    def from_sets(cls, n: int, edges: Iterable[Iterable[int]], max_n: int = MAX_N) -> "Hypergraph":
        return validate(cls(n, tuple(to_mask(e) for e in edges)), max_n=max_n)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], max_n: int = MAX_N) -> "Hypergraph":
        return validate(cls(n, tuple(masks)), max_n=max_n)

    @property
    def ell_bound(self) -> int:
        return max((e.bit_count() for e in self.edges), default=0)

    @property
    def ground_mask(self) -> int:
        return (1 << self.n) - 1

    def edge_sets(self) -> list[list[int]]:
        return [members(e) for e in self.edges]

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, mask: int) -> bool:
        return mask in self.edges


def validate(h: Hypergraph, max_n: int = MAX_N) -> Hypergraph:
    """Check ranges, drop duplicate edges and sort edges canonically."""
    if h.n < 1:
        raise EmptyGround("ground set must have at least one element")
    if h.n > max_n:
        raise EdgeOutOfRange(f"n={h.n} exceeds the configured maximum {max_n}")
    ground = (1 << h.n) - 1
    for e in h.edges:
        if e < 0 or e & ~ground:
            bad = [i for i in members(e & ~ground)] if e >= 0 else [e]
            raise EdgeOutOfRange(f"edge {members(e) if e >= 0 else e} has index {bad[0]} >= n={h.n}")
    return Hypergraph(h.n, canonical_sets(h.edges))


def minimal_antichain(h: Hypergraph) -> Hypergraph:
    # canonical order puts smaller edges first, so one pass suffices
    kept: list[int] = []
    for e in h.edges:
        if not any(is_subset(k, e) for k in kept):
            kept.append(e)
    return Hypergraph(h.n, tuple(kept))


def largest_minimal_element(h: Hypergraph) -> int:
    if not h.edges:
        raise NoEdges("hypergraph has no edges")
    return minimal_antichain(h).ell_bound


def in_upset(h: Hypergraph | Sequence[int], a: int) -> bool:
    """True iff some edge is contained in ``a``."""
    edges = h.edges if isinstance(h, Hypergraph) else h
    return any(e & ~a == 0 for e in edges)


def uncovered_edge(sets: Iterable[int], h: Hypergraph) -> int | None:
    """First edge of ``h`` containing no member of ``sets``, or None."""
    sets = list(sets)
    for e in h.edges:
        if not any(u & ~e == 0 for u in sets):
            return e
    return None

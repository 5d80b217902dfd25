"""Seeded, counter-based randomness.

Every random draw in the package comes from a Philox4x64 generator keyed by a
``(master, stream)`` pair.  Philox is counter based: block ``k`` of a stream is
a pure function of the key and ``k``, so trial ``t`` of a Monte Carlo run can
be regenerated in isolation by advancing the counter to its offset.  This
keeps results independent of how trials are chunked or ordered.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

import numpy as np

_U64 = (1 << 64) - 1
# Philox emits 4 64-bit words per counter increment.
_WORDS_PER_BLOCK = 4


@dataclass(frozen=True)
class RandomSeed:
    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            v = getattr(self, name)
            if not 0 <= v <= _U64:
                raise ValueError(f"{name}={v} outside the unsigned 64-bit range")

    def child(self, stream: int) -> "RandomSeed":
        return RandomSeed(self.master, stream)

    @classmethod
    def fresh(cls) -> "RandomSeed":
        return cls(secrets.randbits(64), 0)


def generator(seed: RandomSeed, block_offset: int = 0) -> np.random.Generator:
    bitgen = np.random.Philox(key=np.array([seed.master, seed.stream], dtype=np.uint64))
    if block_offset:
        bitgen.advance(block_offset)
    return np.random.Generator(bitgen)


def padded_width(width: int) -> int:
    """Words reserved per trial, rounded up to whole Philox blocks."""
    return max(_WORDS_PER_BLOCK, -(-width // _WORDS_PER_BLOCK) * _WORDS_PER_BLOCK)


def trial_uniforms(seed: RandomSeed, first_trial: int, count: int, width: int) -> np.ndarray:
    """Uniforms for trials ``first_trial .. first_trial+count-1``, shape (count, width).

    Trial ``t`` always reads words ``[t*W, t*W + width)`` of the stream, where
    ``W = padded_width(width)``.
    """
    W = padded_width(width)
    rng = generator(seed, first_trial * W // _WORDS_PER_BLOCK)
    return rng.random((count, W))[:, :width]

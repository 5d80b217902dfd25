"""Natural-log arithmetic for sums of powers ``p**k`` that may underflow."""

import math
from typing import Iterable

NEG_INF = -math.inf


def log_power(p: float, k: int) -> float:
    """``log(p**k)`` with the convention ``0**0 == 1``."""
    if k == 0:
        return 0.0
    if p == 0.0:
        return NEG_INF
    return k * math.log(p)


def logsumexp(values: Iterable[float]) -> float:
    values = [v for v in values if v != NEG_INF]
    if not values:
        return NEG_INF
    top = max(values)
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def log_power_sum(p: float, sizes: Iterable[int]) -> float:
    """``log(sum(p**k for k in sizes))``."""
    return logsumexp(log_power(p, k) for k in sizes)


def log_binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def safe_exp(x: float) -> float:
    return 0.0 if x == NEG_INF else math.exp(x)

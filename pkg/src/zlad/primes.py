"""Prime counting by an odd-only segmented sieve, and the x/ln x asymptotic."""
from __future__ import annotations

import math

import numpy as np

PRIME_PI_CAP = 10**8
SEGMENT = 1 << 20


def _small_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


def prime_pi(x: int) -> int:
    """Exact pi(x) for x <= 1e8."""
    x = int(x)
    if x > PRIME_PI_CAP:
        raise ValueError(f"prime_pi is capped at {PRIME_PI_CAP}, got {x}")
    if x < 2:
        return 0
    base = _small_primes(math.isqrt(x) + 1)[1:]  # odd base primes
    count = 1  # the prime 2
    # segment [lo, hi) over odd numbers only; index i <-> lo + 2i
    lo = 3
    while lo <= x:
        hi = min(lo + 2 * SEGMENT, x + 1)
        size = (hi - lo + 1) // 2
        mark = np.ones(size, dtype=bool)
        for p in base:
            p = int(p)
            sq = p * p
            if sq >= hi:
                break
            start = max(sq, (lo + p - 1) // p * p)
            if start % 2 == 0:
                start += p
            mark[(start - lo) // 2::p] = False
        count += int(mark.sum())
        lo += 2 * size
    return count


def pi_asymptotic(x: float) -> float:
    return x / math.log(x)

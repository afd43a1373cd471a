"""Exact prime generation and counting via a segmented, odd-only sieve.

All operations are deterministic and exact; nothing here approximates.
The segment budget caps memory per sieve call, and the sieve ceiling makes
out-of-range requests fail loudly instead of silently switching algorithms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, DomainError, ResourceLimitError

DEFAULT_SEGMENT_BUDGET = 1 << 22  # integers per segment
DEFAULT_CEILING = 200_000_000

# Deterministic Miller-Rabin base set covering the full 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_base_cache: dict[str, object] = {"limit": 0, "primes": np.empty(0, dtype=np.int64)}


def _base_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain monolithic sieve, cached and grow-only."""
    if limit <= _base_cache["limit"]:
        primes = _base_cache["primes"]
        return primes[: np.searchsorted(primes, limit, side="right")]
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    primes = np.flatnonzero(flags).astype(np.int64)
    _base_cache["limit"] = limit
    _base_cache["primes"] = primes
    return primes


@dataclass(frozen=True)
class PrimeSegment:
    """Exact primality flags for [lo, hi): flags[i] is True iff lo+i is prime."""

    lo: int
    hi: int
    flags: np.ndarray

    def count(self) -> int:
        return int(np.count_nonzero(self.flags))

    def primes(self) -> np.ndarray:
        return self.lo + np.flatnonzero(self.flags)


def sieve_segment(lo: int, hi: int, budget: int = DEFAULT_SEGMENT_BUDGET) -> PrimeSegment:
    """Sieve [lo, hi) exactly. Odd-only wheel internally; full flags out."""
    if not (0 <= lo < hi):
        raise DomainError(f"need 0 <= lo < hi, got [{lo}, {hi})")
    if hi - lo > budget:
        raise BudgetError(f"segment length {hi - lo} exceeds budget {budget}")
    flags = np.zeros(hi - lo, dtype=bool)
    if lo <= 2 < hi:
        flags[2 - lo] = True
    start = max(lo, 3)
    if start % 2 == 0:
        start += 1
    if start >= hi:
        return PrimeSegment(lo, hi, flags)
    odd = flags[start - lo :: 2]
    odd[:] = True
    for p in _base_primes(math.isqrt(hi - 1)):
        p = int(p)
        if p == 2:
            continue
        first = max(p * p, ((start + p - 1) // p) * p)
        if first % 2 == 0:
            first += p
        if first >= hi:
            if p * p >= hi:
                break
            continue
        odd[(first - start) // 2 :: p] = False
    return PrimeSegment(lo, hi, flags)


def segment_bounds(lo: int, hi: int, budget: int = DEFAULT_SEGMENT_BUDGET):
    """Deterministic partition of [lo, hi) into budget-sized pieces."""
    edges = list(range(lo, hi, budget)) + [hi]
    return list(zip(edges[:-1], edges[1:]))


def _segment_counts(lo: int, hi: int, budget: int, workers: int) -> list[int]:
    bounds = segment_bounds(lo, hi, budget)
    if workers <= 1:
        return [sieve_segment(a, b, budget).count() for a, b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(sieve_segment, a, b, budget) for a, b in bounds]
        return [f.result().count() for f in futs]  # fixed segment order


def prime_count(
    x: int,
    ceiling: int = DEFAULT_CEILING,
    budget: int = DEFAULT_SEGMENT_BUDGET,
    workers: int = 1,
) -> int:
    """pi(x): the exact number of primes <= x, by segmented sieving."""
    if x < 0:
        raise DomainError(f"prime_count needs x >= 0, got {x}")
    if x > ceiling:
        raise ResourceLimitError(f"x={x} exceeds sieve ceiling {ceiling}")
    if x < 2:
        return 0
    return sum(_segment_counts(0, x + 1, budget, workers))


def prime_count_monolithic(x: int, ceiling: int = DEFAULT_CEILING) -> int:
    """pi(x) by a single odd-only sieve array; structurally independent of
    the segmented path, kept as anti-bug redundancy."""
    if x < 0:
        raise DomainError(f"prime_count needs x >= 0, got {x}")
    if x > ceiling:
        raise ResourceLimitError(f"x={x} exceeds sieve ceiling {ceiling}")
    if x < 2:
        return 0
    if x == 2:
        return 1
    # odd[i] represents 2i+1; index range covers odds <= x
    n_odd = (x - 1) // 2 + 1
    odd = np.ones(n_odd, dtype=bool)
    odd[0] = False  # 1
    for p in range(3, math.isqrt(x) + 1, 2):
        if odd[p // 2]:
            odd[p * p // 2 :: p] = False
    return 1 + int(np.count_nonzero(odd))


def primes_in(
    lo: int,
    hi: int,
    ceiling: int = DEFAULT_CEILING,
    budget: int = DEFAULT_SEGMENT_BUDGET,
):
    """Yield the primes in [lo, hi) in increasing order, one segment at a time."""
    if lo >= hi:
        raise DomainError(f"reversed or empty range [{lo}, {hi})")
    if hi > ceiling:
        raise ResourceLimitError(f"hi={hi} exceeds sieve ceiling {ceiling}")
    for a, b in segment_bounds(max(lo, 0), hi, budget):
        for p in sieve_segment(a, b, budget).primes():
            yield int(p)


def nth_prime(
    i: int,
    ceiling: int = DEFAULT_CEILING,
    budget: int = DEFAULT_SEGMENT_BUDGET,
) -> int:
    """p_i with p_1 = 2; fails loudly if p_i would exceed the ceiling."""
    if i < 1:
        raise DomainError(f"nth_prime needs i >= 1, got {i}")
    remaining = i
    for a, b in segment_bounds(0, ceiling + 1, budget):
        seg = sieve_segment(a, b, budget)
        c = seg.count()
        if c >= remaining:
            idx = np.flatnonzero(seg.flags)[remaining - 1]
            return int(seg.lo + idx)
        remaining -= c
    raise ResourceLimitError(f"p_{i} exceeds sieve ceiling {ceiling}")


def is_prime_u64(n: int) -> bool:
    """Exact primality for 0 <= n < 2**64 (deterministic strong-probable-prime battery)."""
    if not (0 <= n < 2**64):
        raise DomainError(f"is_prime_u64 needs 0 <= n < 2**64, got {n}")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True

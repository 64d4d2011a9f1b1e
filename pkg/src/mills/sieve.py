"""Segmented sieve of Eratosthenes over odd numbers, backed by numpy."""

from __future__ import annotations

import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

DEFAULT_SEGMENT = 1 << 21


@lru_cache(maxsize=8)
def _small_primes_cached(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.flags.writeable = False
    return out


def small_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as a read-only int64 array."""
    return _small_primes_cached(int(limit))


def segment_primes(lo: int, hi: int) -> np.ndarray:
    """Primes ``p`` with ``lo <= p < hi``."""
    lo = max(lo, 0)
    if hi <= lo or hi <= 2:
        return np.zeros(0, dtype=np.int64)
    start = lo | 1  # first odd >= lo
    if start < 3:
        start = 3
    count = (hi - start + 1) // 2 if hi > start else 0
    flags = np.ones(max(count, 0), dtype=bool)
    if count:
        for p in small_primes(math.isqrt(hi - 1))[1:]:
            p = int(p)
            first = max(p * p, -(-start // p) * p)
            if first % 2 == 0:
                first += p
            if first >= hi:
                continue
            flags[(first - start) // 2 :: p] = False
    odd = start + 2 * np.flatnonzero(flags).astype(np.int64)
    if lo <= 2 < hi:
        return np.concatenate([np.array([2], dtype=np.int64), odd])
    return odd


def iter_segments(
    lo: int,
    hi: int | None = None,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> Iterator[np.ndarray]:
    """Yield prime arrays for consecutive windows of ``[lo, hi)``.

    With ``hi=None`` the stream is unbounded; callers stop consuming when they
    have what they need.  Segments are yielded in ascending order whatever
    the thread count.
    """
    if segment_size < 2:
        raise ValueError("segment_size must be >= 2")

    def bounds() -> Iterator[tuple[int, int]]:
        a = lo
        while hi is None or a < hi:
            b = a + segment_size if hi is None else min(a + segment_size, hi)
            yield a, b
            a = b

    if threads <= 1:
        for a, b in bounds():
            yield segment_primes(a, b)
        return

    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = []
        for a, b in bounds():
            pending.append(pool.submit(segment_primes, a, b))
            if len(pending) >= 2 * threads:
                yield pending.pop(0).result()
        for fut in pending:
            yield fut.result()


def primes_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    parts = list(iter_segments(lo, hi, segment_size))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def iter_with_tail(
    lo: int,
    hi: int,
    tail: int = 1,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> Iterator[np.ndarray]:
    """Like :func:`iter_segments` on ``[lo, hi)`` but keeps going past ``hi``
    until ``tail`` primes ``>= hi`` have been emitted.

    Used wherever a statistic of a prime depends on its successors (gaps,
    consecutive-prime tuples).
    """
    seen_after = 0
    for seg in iter_segments(lo, None, segment_size, threads):
        if seg.size and seg[-1] >= hi:
            cut = int(np.searchsorted(seg, hi))
            need = tail - seen_after
            after = seg.size - cut
            if after >= need:
                yield seg[: cut + need]
                return
            seen_after += after
        yield seg

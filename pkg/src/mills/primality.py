"""Primality verdicts, next-prime search and small-prime offset sieving.

Below :data:`DETERMINISTIC_LIMIT` the strong-pseudoprime test with the first
thirteen prime bases is a proof (Sorenson and Webster, 2015).  Above it a
number that passes base 2, a strong Lucas test (Selfridge parameters) and
extra seeded random bases is reported as a probable prime, never as proven.
"""

from __future__ import annotations

import enum
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import gmpy2
import numpy as np

from .arith import to_decimal
from .sieve import small_primes

DETERMINISTIC_LIMIT = 3317044064679887385961981

# (exclusive bound, bases) pairs; each set is a proof below its bound
_MR_BASES = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (DETERMINISTIC_LIMIT, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)

_TRIAL_PRIMES = tuple(int(p) for p in small_primes(1000))
_TRIAL_LIMIT = 1000

DEFAULT_RNG_SEED = 1947


class Status(str, enum.Enum):
    COMPOSITE = "composite"
    PROVABLE = "provable-prime"
    PROBABLE = "probable-prime"


@dataclass(frozen=True)
class PrimalityVerdict:
    """``detail`` is a witness for composites (a factor for trial division,
    a base for Miller-Rabin, ``None`` for a Lucas failure) and the number of
    strong-pseudoprime rounds for probable primes."""

    status: Status
    method: str
    detail: int | None = None

    @property
    def is_composite(self) -> bool:
        return self.status is Status.COMPOSITE

    def to_dict(self) -> dict:
        return {"status": self.status.value, "method": self.method, "detail": self.detail}

    @classmethod
    def from_dict(cls, data: dict) -> PrimalityVerdict:
        return cls(Status(data["status"]), str(data["method"]), data.get("detail"))


class SearchExhausted(Exception):
    def __init__(self, start: int, bound: int):
        super().__init__(f"no prime in ({to_decimal(start)}, {to_decimal(start)} + {bound}]")
        self.start = start
        self.bound = bound


def strong_probable_prime(n, base: int) -> bool:
    """Miller-Rabin round for odd ``n > 2``."""
    n = gmpy2.mpz(n)
    d = n - 1
    s = 0
    while not d & 1:
        d >>= 1
        s += 1
    x = gmpy2.powmod(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
        if x == 1:
            return False
    return False


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def strong_lucas_probable_prime(n) -> bool:
    """Strong Lucas test with Selfridge's method A (P = 1)."""
    n = gmpy2.mpz(n)
    if gmpy2.is_square(n):
        return False
    D = 5
    while True:
        j = jacobi(D, int(n))
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4

    d = n + 1
    s = 0
    while not d & 1:
        d >>= 1
        s += 1

    # binary ladder for U_d, V_d, Q^d (mod n)
    U, V, Qk = gmpy2.mpz(1), gmpy2.mpz(P), gmpy2.mpz(Q % n)
    inv2 = (n + 1) // 2
    for bit in bin(d)[3:]:
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def _deterministic_bases(n: int) -> tuple[int, ...]:
    for bound, bases in _MR_BASES:
        if n < bound:
            return bases
    raise ValueError("above deterministic range")


def classify(n: int, prp_rounds: int = 1, rng_seed: int = DEFAULT_RNG_SEED) -> PrimalityVerdict:
    """Classify ``n >= 0`` as composite, proven prime, or probable prime.

    Extra random bases come from a generator keyed on ``(rng_seed, n)``, so a
    verdict never depends on the order in which candidates are tested.
    """
    if prp_rounds < 1:
        raise ValueError("prp_rounds must be >= 1")
    if n < 2:
        return PrimalityVerdict(Status.COMPOSITE, "trivial")
    for p in _TRIAL_PRIMES:
        if n == p:
            return PrimalityVerdict(Status.PROVABLE, "trial-division")
        if n % p == 0:
            return PrimalityVerdict(Status.COMPOSITE, "trial-division", p)
    if n < _TRIAL_LIMIT * _TRIAL_LIMIT:
        return PrimalityVerdict(Status.PROVABLE, "trial-division")

    if n < DETERMINISTIC_LIMIT:
        for b in _deterministic_bases(n):
            if not strong_probable_prime(n, b):
                return PrimalityVerdict(Status.COMPOSITE, "deterministic-mr-basis", b)
        return PrimalityVerdict(Status.PROVABLE, "deterministic-mr-basis")

    if not strong_probable_prime(n, 2):
        return PrimalityVerdict(Status.COMPOSITE, "mr+lucas", 2)
    if not strong_lucas_probable_prime(n):
        return PrimalityVerdict(Status.COMPOSITE, "mr+lucas", None)
    rng = random.Random(f"{rng_seed}:{to_decimal(n)}")
    for _ in range(prp_rounds - 1):
        b = rng.randrange(3, n - 1)
        if not strong_probable_prime(n, b):
            return PrimalityVerdict(Status.COMPOSITE, "mr+lucas", b)
    return PrimalityVerdict(Status.PROBABLE, "mr+lucas", prp_rounds)


def witness_holds(n: int, verdict: PrimalityVerdict) -> bool:
    """Re-check that a composite verdict's witness really shows compositeness."""
    if not verdict.is_composite:
        return False
    w = verdict.detail
    if verdict.method == "trivial":
        return n < 2
    if w is None:
        return not strong_lucas_probable_prime(n)
    if verdict.method == "trial-division":
        return 1 < w < n and n % w == 0
    return n > 2 and n % 2 == 1 and not strong_probable_prime(n, w)


def default_sieve_limit(n: int) -> int:
    digits = int(n.bit_length() * 0.30103) + 1
    if digits <= 20:
        return 1000
    if digits < 100:
        return 10**5
    if digits <= 1000:
        return 10**6
    return 10**7


def sieve_offsets(base: int, window: int, small_prime_limit: int) -> list[int]:
    """Offsets ``o`` in ``[1, window]`` such that ``base + o`` has no prime
    factor ``<= small_prime_limit``.  Only ``base mod p`` is ever computed."""
    if window < 1:
        raise ValueError("window must be >= 1")
    keep = np.ones(window + 1, dtype=bool)
    keep[0] = False
    big = gmpy2.mpz(base)
    for p in small_primes(small_prime_limit):
        p = int(p)
        # first o >= 1 with base + o == 0 (mod p)
        first = (-int(big % p)) % p or p
        if first <= window:
            keep[first::p] = False
    return np.flatnonzero(keep).tolist()


def _classify_task(args: tuple[int, int, int]) -> PrimalityVerdict:
    return classify(*args)


def next_prime(
    n: int,
    prp_rounds: int = 1,
    search_bound: int | None = None,
    *,
    rng_seed: int = DEFAULT_RNG_SEED,
    small_prime_limit: int | None = None,
    threads: int = 1,
) -> tuple[int, PrimalityVerdict]:
    """Least ``p > n`` that :func:`classify` does not call composite.

    Raises :class:`SearchExhausted` when ``search_bound`` is given and no such
    ``p <= n + search_bound`` exists.  With ``threads > 1`` survivors are
    tested in parallel batches; the answer is still the smallest qualifying
    offset.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < 2:
        return 2, classify(2)
    limit = small_prime_limit if small_prime_limit is not None else default_sieve_limit(n)
    # a sieving prime must never equal a candidate
    limit = min(limit, math.isqrt(n))
    window = max(64, 2 * n.bit_length())
    if search_bound is not None:
        window = min(window, search_bound)
    done = 0
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while search_bound is None or done < search_bound:
            width = window if search_bound is None else min(window, search_bound - done)
            base = n + done
            survivors = sieve_offsets(base, width, limit)
            if pool is None:
                for o in survivors:
                    v = classify(base + o, prp_rounds, rng_seed)
                    if not v.is_composite:
                        return base + o, v
            else:
                batch = 4 * threads
                for i in range(0, len(survivors), batch):
                    chunk = survivors[i : i + batch]
                    args = [(base + o, prp_rounds, rng_seed) for o in chunk]
                    for o, v in zip(chunk, pool.map(_classify_task, args)):
                        if not v.is_composite:
                            return base + o, v
            done += width
            window *= 2
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    raise SearchExhausted(n, search_bound)

"""Honaker trios: consecutive primes p < q < r with p | qr + 1.

Writing ``q = p + 2k`` and ``r = q + 2l`` gives ``qr + 1 = 4k^2 + 4kl + 1``
modulo p, which is where the finiteness argument starts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaps import cg_threshold
from .sieve import DEFAULT_SEGMENT, iter_with_tail


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class HonakerTrio:
    p: int
    q: int
    r: int

    @property
    def k(self) -> int | None:
        """Half of ``q - p``; ``None`` for the odd-gap trio starting at 2."""
        return (self.q - self.p) // 2 if self.p > 2 else None

    @property
    def l(self) -> int | None:  # noqa: E743
        return (self.r - self.q) // 2 if self.p > 2 else None


def reduced_form(p: int, q: int, r: int) -> int:
    """``4k^2 + 4kl + 1`` for odd consecutive primes."""
    k, l = (q - p) // 2, (r - q) // 2
    return 4 * k * k + 4 * k * l + 1


def divisibility_witness(trio: HonakerTrio) -> int:
    if trio.p <= 2:
        raise ValueError("the reformulation needs p > 2")
    w = reduced_form(trio.p, trio.q, trio.r)
    if w % trio.p or (trio.q * trio.r + 1) % trio.p:
        raise InvariantViolation(f"{trio} fails p | 4k^2+4kl+1")
    return w


def _tuple_hits(
    window: np.ndarray, length: int, sign: int, addend: int, divisor_index: int
) -> np.ndarray:
    """Start indices ``i`` where ``window[i + divisor_index]`` divides the
    product of the other ``length - 1`` members plus ``sign * addend``."""
    n = window.size - length + 1
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    d = window[divisor_index : divisor_index + n]
    if int(window[-1]) < 3_000_000_000:
        # residues stay below 3e9, products below 9e18 < 2**63
        acc = np.ones(n, dtype=np.int64)
        for j in range(length):
            if j != divisor_index:
                acc = acc * (window[j : j + n] % d) % d
        hit = (acc + sign * addend) % d == 0
        return np.flatnonzero(hit)
    out = []
    for i in range(n):
        div = int(d[i])
        acc = 1
        for j in range(length):
            if j != divisor_index:
                acc = acc * int(window[i + j]) % div
        if (acc + sign * addend) % div == 0:
            out.append(i)
    return np.array(out, dtype=np.int64)


def search_tuples(
    lo: int,
    hi: int,
    length: int = 3,
    sign: int = 1,
    addend: int = 1,
    divisor_index: int = 0,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> list[tuple[int, ...]]:
    """Runs of ``length`` consecutive primes, first member in ``[lo, hi)``,
    where the member at ``divisor_index`` divides the product of the others
    plus ``sign * addend``."""
    if not 2 <= lo < hi:
        raise ValueError("need 2 <= lo < hi")
    if length < 2 or not 0 <= divisor_index < length or sign not in (1, -1):
        raise ValueError("bad tuple parameters")
    found = []
    carry = np.zeros(0, dtype=np.int64)
    for seg in iter_with_tail(lo, hi, length - 1, segment_size, threads):
        window = np.concatenate([carry, seg])
        for i in _tuple_hits(window, length, sign, addend, divisor_index):
            t = tuple(int(v) for v in window[i : i + length])
            if t[0] < hi:
                found.append(t)
        carry = window[-(length - 1) :] if window.size >= length - 1 else window
    return found


def search(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> list[HonakerTrio]:
    return [HonakerTrio(*t) for t in search_tuples(lo, hi, segment_size=segment_size, threads=threads)]


def finiteness_bound(M: float) -> int:
    """Beyond this p no trio exists if every gap satisfies g(p) <= M log^2 p."""
    return cg_threshold(M)

"""Prime gaps, prime counting, li(x) and the small checks built on them.

All logarithms are natural logarithms.  The Cramér-Granville ratio
``gap / log(p)**2`` changes value under any other base.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .primality import SearchExhausted, classify, next_prime
from .sieve import DEFAULT_SEGMENT, iter_segments, iter_with_tail

SCHOENFELD_MIN_X = 2657


@dataclass(frozen=True)
class GapRecord:
    p: int
    next: int

    @property
    def gap(self) -> int:
        return self.next - self.p

    @property
    def ratio(self) -> float:
        # gap < 2**20 and log(p)**2 > 0.48 here: double rounding is ~1e-16 relative
        return self.gap / math.log(self.p) ** 2


def _record_stream(
    lo: int, hi: int, segment_size: int, threads: int
) -> Iterator[GapRecord]:
    """Primes in ``[lo, hi)`` whose following gap beats every earlier gap
    counted from the first prime ``>= lo``."""
    best = 0
    prev: np.ndarray | None = None
    for seg in iter_with_tail(lo, hi, 1, segment_size, threads):
        arr = seg if prev is None else np.concatenate([prev, seg])
        if arr.size < 2:
            prev = arr
            continue
        gaps = np.diff(arr)
        starts = arr[:-1]
        keep = int(np.searchsorted(starts, hi))
        gaps, starts = gaps[:keep], starts[:keep]
        if gaps.size:
            running = np.maximum.accumulate(np.concatenate([[best], gaps]))
            for i in np.flatnonzero(gaps > running[:-1]):
                yield GapRecord(int(starts[i]), int(arr[i + 1]))
            best = int(running[-1])
        prev = arr[-1:]


def maximal_gaps(
    limit: int, segment_size: int = DEFAULT_SEGMENT, threads: int = 1
) -> list[GapRecord]:
    """Maximal-gap records for starting primes ``p < limit``."""
    if limit < 3:
        raise ValueError("limit must be >= 3")
    return list(_record_stream(2, limit, segment_size, threads))


def ratio_sup(
    lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT, threads: int = 1
) -> tuple[float, GapRecord]:
    """Largest ``gap / log(p)**2`` over primes ``lo <= p < hi``.

    Only records relative to ``lo`` are examined: between two consecutive
    records the gap cannot grow while ``log(p)`` does, so the ratio of a
    non-record prime never beats that of the record before it.
    """
    if not 11 <= lo < hi:
        raise ValueError("need 11 <= lo < hi")
    best: GapRecord | None = None
    for rec in _record_stream(lo, hi, segment_size, threads):
        if best is None or rec.ratio > best.ratio:
            best = rec
    if best is None:
        raise ValueError(f"no prime in [{lo}, {hi})")
    return best.ratio, best


def prime_count(x: int, segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> int:
    """pi(x) by segmented sieve."""
    if x < 2:
        return 0
    return sum(int(seg.size) for seg in iter_segments(0, int(x) + 1, segment_size, threads))


def li(x, precision: float = 1e-12) -> mpmath.mpf:
    """Principal-value logarithmic integral to within ``precision``.

    Uses ``li(x) = gamma + log(log x) + sum_k (log x)**k / (k * k!)``.  Once
    ``k + 2 > log x`` the tail after term ``k`` is bounded by the next term
    times ``1 / (1 - log(x)/(k+2))``; summation stops when that bound drops
    below half the requested precision.
    """
    if precision <= 0:
        raise ValueError("precision must be positive")
    x = mpmath.mpf(x)
    if x <= 1:
        raise ValueError("li is evaluated here for x > 1 only")
    mag = max(1, int(mpmath.log10(x)) + 1)
    dps = mag + max(0, int(-math.log10(precision))) + 10
    with mpmath.workdps(dps):
        u = mpmath.log(x)
        total = mpmath.euler + mpmath.log(u)
        power = mpmath.mpf(1)  # u**k / k!
        k = 0
        half = mpmath.mpf(precision) / 2
        while True:
            k += 1
            power = power * u / k
            total += power / k
            if k + 2 > u:
                nxt = power * u / (k + 1) / (k + 1)
                if nxt / (1 - u / (k + 2)) < half:
                    break
        return +total


@dataclass(frozen=True)
class SchoenfeldRow:
    x: int
    pi: int | None
    li: float | None
    bound: float | None
    slack: float | None
    passed: bool
    note: str = ""


@dataclass
class SchoenfeldReport:
    rows: list[SchoenfeldRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)


def schoenfeld_check(
    xs: Iterable[int], precision: float = 1e-6, segment_size: int = DEFAULT_SEGMENT, threads: int = 1
) -> SchoenfeldReport:
    """Check ``|pi(x) - li(x)| < sqrt(x) log(x) / (8 pi)`` at each x.

    The li evaluation error is charged against the slack, so a pass is not
    an artefact of rounding.
    """
    report = SchoenfeldReport()
    for x in xs:
        x = int(x)
        if x < SCHOENFELD_MIN_X:
            report.rows.append(SchoenfeldRow(x, None, None, None, None, False, f"x < {SCHOENFELD_MIN_X}: outside the bound's range"))
            continue
        pi = prime_count(x, segment_size, threads)
        lix = li(x, precision)
        with mpmath.workdps(30):
            bound = mpmath.sqrt(x) * mpmath.log(x) / (8 * mpmath.pi)
            slack = bound - abs(pi - lix) - precision
        report.rows.append(SchoenfeldRow(x, pi, float(lix), float(bound), float(slack), slack > 0))
    return report


def analytic_bound(x: float) -> float:
    """Lower bound for pi((x+1)^3) - pi(x^3) under RH, valid for x^3 >= 2657."""
    if x <= 1:
        raise ValueError("x must exceed 1")
    return (3 * x * x + 3 * x + 1) / (3 * math.log(x)) - 3 / (4 * math.pi) * (x + 1) ** 1.5 * math.log(x + 1)


@dataclass
class CubeReport:
    x_min: int
    x_max: int
    checked: int = 0
    failures: list[int] = field(default_factory=list)
    # largest offset of the first prime past x^3, as (x, offset)
    widest: tuple[int, int] = (0, 0)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> int | None:
        return self.failures[0] if self.failures else None


def cube_interval_check(x_max: int, x_min: int = 1, prp_rounds: int = 1) -> CubeReport:
    """Confirm a prime in ``(x^3, (x+1)^3)`` for every integer x in range."""
    if x_max < 1 or x_min < 1:
        raise ValueError("x range must start at 1 or above")
    report = CubeReport(x_min, x_max)
    for x in range(x_min, x_max + 1):
        base = x**3
        try:
            p, _ = next_prime(base, prp_rounds, 3 * x * x + 3 * x)
        except SearchExhausted:
            report.failures.append(x)
        else:
            if p - base > report.widest[1]:
                report.widest = (x, p - base)
        report.checked += 1
    return report


def _cg_holds(p: int, M: float) -> bool:
    return (p - 1) / 2 <= (M * math.log(p) ** 2) ** 2


def cg_threshold(M: float) -> int:
    """Largest integer ``p > 50`` with ``sqrt((p-1)/2) <= M log(p)**2``.

    The left side outgrows the right for p > 50, so the admissible set is an
    interval and bisection finds its end.  Returns 50 when no ``p > 50``
    qualifies.
    """
    if M <= 0:
        raise ValueError("M must be positive")
    lo = 51
    if not _cg_holds(lo, M):
        return 50
    hi = 2 * lo
    while _cg_holds(hi, M):
        lo, hi = hi, 2 * hi
    # invariant: holds at lo, fails at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cg_holds(mid, M):
            lo = mid
        else:
            hi = mid
    return lo


# -- line-oriented gap tables ---------------------------------------------


def format_gap_table(records: Iterable[GapRecord]) -> str:
    lines = ["# p gap ratio"]
    lines += [f"{r.p} {r.gap} {r.ratio:.10f}" for r in records]
    return "\n".join(lines) + "\n"


def parse_gap_table(text: str) -> list[tuple[int, int, float | None]]:
    """Rows of ``p gap [ratio]``; ``#`` starts a comment."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'p gap [ratio]'")
        ratio = float(parts[2]) if len(parts) == 3 else None
        rows.append((int(parts[0]), int(parts[1]), ratio))
    return rows


def check_gap_table(
    rows: list[tuple[int, int, float | None]],
    scan_limit: int | None = None,
    prp_rounds: int = 5,
) -> list[str]:
    """Problems found in a third-party maximal-gap table (empty if none).

    Each row is checked on its own (p prime, next prime at p + gap, stated
    ratio), gaps must increase, and with ``scan_limit`` the rows below it
    must be exactly our own records.
    """
    problems = []
    last_gap = 0
    for p, gap, ratio in rows:
        if classify(p, prp_rounds).is_composite:
            problems.append(f"{p}: not prime")
            continue
        q, _ = next_prime(p, prp_rounds)
        if q - p != gap:
            problems.append(f"{p}: gap is {q - p}, table says {gap}")
        if ratio is not None and abs(ratio - gap / math.log(p) ** 2) > 1e-6:
            problems.append(f"{p}: ratio {ratio} disagrees with {gap / math.log(p) ** 2:.10f}")
        if gap <= last_gap:
            problems.append(f"{p}: gap {gap} does not exceed previous record {last_gap}")
        last_gap = max(last_gap, gap)
    if scan_limit is not None:
        ours = [(r.p, r.gap) for r in maximal_gaps(scan_limit)]
        theirs = [(p, g) for p, g, _ in rows if p < scan_limit]
        if ours != theirs:
            missing = sorted(set(ours) - set(theirs))
            extra = sorted(set(theirs) - set(ours))
            problems.append(f"records below {scan_limit} differ: missing {missing[:5]}, unexpected {extra[:5]}")
    return problems

"""Decimal digits of Mills' constant with a guaranteed-correct prefix.

For a chain with ``c = 3`` and term ``b_n``::

    b_n ** (3**-n)  <  A  <  (b_n + 1) ** (3**-n)

Both ends are reached by ``n`` cube roots, rounded down for the lower end and
up for the upper end, so the computed interval always contains the exact one.
The digits common to both ends are therefore digits of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .arith import FixedPoint, Rounding, cbrt_directed, to_decimal
from .millschain import MillsChain, digit_counts


class PrecisionTooLow(ValueError):
    pass


@dataclass(frozen=True)
class ConstantBracket:
    lower: FixedPoint
    upper: FixedPoint
    depth: int
    scale: int
    guaranteed_digits: int

    @property
    def prefix(self) -> str:
        """The guaranteed digits, with the decimal point in place."""
        return _format_prefix(self.lower, self.guaranteed_digits)


@dataclass(frozen=True)
class DigitResult:
    digits: str
    guaranteed: int
    depth: int
    scale: int
    requested: int

    @property
    def short(self) -> bool:
        return self.guaranteed < self.requested


def reference_digits() -> str:
    """The published 600-place expansion, ``"1.3063778838..."``."""
    return resources.files("mills").joinpath("data/reference_digits.txt").read_text().strip()


def _format_prefix(x: FixedPoint, ndigits: int) -> str:
    s = to_decimal(x.mantissa).rjust(x.scale + 1, "0")
    int_len = len(s) - x.scale
    head = s[:ndigits]
    if ndigits <= int_len:
        return head
    return head[:int_len] + "." + head[int_len:]


def common_prefix_digits(lower: FixedPoint, upper: FixedPoint) -> int:
    if lower.scale != upper.scale:
        raise ValueError("bracket ends must share a scale")
    a, b = to_decimal(lower.mantissa), to_decimal(upper.mantissa)
    if len(a) != len(b):
        return 0
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def _root_chain(start: int, depth: int, scale: int, direction: Rounding) -> FixedPoint:
    x = FixedPoint(start, 0)
    for _ in range(depth):
        x = cbrt_directed(x, scale, direction)
    return x


def bracket(chain: MillsChain, depth: int, scale: int) -> ConstantBracket:
    if chain.c != 3:
        raise NotImplementedError("digit extraction is implemented for c = 3 only")
    if not 1 <= depth <= len(chain):
        raise ValueError(f"chain has {len(chain)} terms, depth {depth} requested")
    b = chain.terms[depth - 1]
    lower = _root_chain(b, depth, scale, Rounding.DOWN)
    upper = _root_chain(b + 1, depth, scale, Rounding.UP)
    g = common_prefix_digits(lower, upper)
    if g == 0:
        raise PrecisionTooLow(f"scale {scale} at depth {depth} pins no digits")
    return ConstantBracket(lower, upper, depth, scale, g)


def default_scale(requested: int, depth: int) -> int:
    return requested + 10 * depth


def digits(chain: MillsChain, requested: int, scale: int | None = None) -> DigitResult:
    """The first ``requested`` digits of A (leading ``1`` counts as one).

    Uses the shallowest depth whose bracket guarantees enough digits; a chain
    that is too short yields its best prefix with ``short`` set.
    """
    if requested < 1:
        raise ValueError("requested must be >= 1")
    counts = digit_counts(chain)
    # guaranteed digits track len(b_n) plus a little; skip hopeless depths
    first = next((n for n, d in enumerate(counts, 1) if d + n >= requested), len(counts))
    best = None
    for n in range(first, len(counts) + 1):
        s = scale if scale is not None else default_scale(max(requested, counts[n - 1]), n)
        try:
            br = bracket(chain, n, s)
        except PrecisionTooLow:
            continue
        best = br
        if br.guaranteed_digits >= requested:
            break
    if best is None:
        raise PrecisionTooLow("no depth produced a guaranteed digit")
    g = min(best.guaranteed_digits, requested)
    return DigitResult(_format_prefix(best.lower, g), best.guaranteed_digits, best.depth, best.scale, requested)


def first_mismatch(candidate: str, reference: str | None = None) -> int | None:
    """Index of the first differing character over the overlap of
    ``candidate`` and the reference expansion, or ``None`` if they agree."""
    ref = reference if reference is not None else reference_digits()
    for i, (x, y) in enumerate(zip(candidate, ref)):
        if x != y:
            return i
    return None


def group_digits(text: str, group: int = 10, per_row: int = 5) -> str:
    """Lay digits out in rows of ``per_row`` groups of ``group`` decimals."""
    head, _, frac = text.partition(".")
    if not frac:
        return head
    groups = [frac[i : i + group] for i in range(0, len(frac), group)]
    groups[0] = head + "." + groups[0]
    rows = [" ".join(groups[i : i + per_row]) for i in range(0, len(groups), per_row)]
    return "\n".join(rows)

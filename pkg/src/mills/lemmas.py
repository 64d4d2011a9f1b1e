"""The inequality ``1 + x^c + x^(c-1) < (1 + x)^c`` for x > 1, c > 2.

Both sides are evaluated in interval arithmetic and the precision is raised
until the interval for their difference excludes zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath


class PrecisionExhausted(ArithmeticError):
    pass


@dataclass(frozen=True)
class XcInstance:
    x: float | str | Fraction
    c: float | str | Fraction

    def __post_init__(self) -> None:
        if not Fraction(self.x) > 1 or not Fraction(self.c) > 2:
            raise ValueError("need x > 1 and c > 2")


@dataclass(frozen=True)
class XcResult:
    holds: bool
    lhs: float
    rhs: float
    margin: float
    bits: int


def _iv(v, iv):
    if isinstance(v, Fraction):
        return iv.mpf(v.numerator) / v.denominator
    # floats are exact binary values; strings get an enclosing interval
    return iv.mpf(v)


def xc_inequality_holds(inst: XcInstance, start_bits: int = 53, max_bits: int = 1 << 14) -> XcResult:
    iv = mpmath.iv
    bits = start_bits
    while bits <= max_bits:
        old = iv.prec
        iv.prec = bits
        try:
            x, c = _iv(inst.x, iv), _iv(inst.c, iv)
            lhs = 1 + x**c + x ** (c - 1)
            rhs = (1 + x) ** c
            diff = rhs - lhs
        finally:
            iv.prec = old
        if diff.a > 0 or diff.b < 0:
            mid = lambda v: float(v.mid)  # noqa: E731
            return XcResult(bool(diff.a > 0), mid(lhs), mid(rhs), mid(diff), bits)
        bits *= 2
    raise PrecisionExhausted(f"sign undecided at {max_bits} bits for {inst}")


def xc_margin(x: float, c: float) -> float:
    """``(1+x)^c - (1 + x^c + x^(c-1))`` in plain floating point."""
    return (1 + x) ** c - (1 + x**c + x ** (c - 1))

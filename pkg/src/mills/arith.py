"""Exact integer and decimal fixed-point primitives.

Everything here works on Python ints, so no value ever passes through binary
floating point.  A :class:`FixedPoint` is ``mantissa / 10**scale``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import gmpy2


class Rounding(enum.Enum):
    DOWN = "down"
    UP = "up"


def to_decimal(n: int) -> str:
    """Decimal string of ``n`` without the interpreter's int/str digit cap."""
    return gmpy2.mpz(n).digits(10)


def from_decimal(text: str) -> int:
    text = text.strip()
    if not text or not text.lstrip("-").isdigit():
        raise ValueError(f"not a decimal integer: {text[:40]!r}")
    return int(gmpy2.mpz(text, 10))


def decimal_length(n: int) -> int:
    return len(to_decimal(abs(n)))


def ipow(base: int, exp: int) -> int:
    if exp < 0:
        raise ValueError(f"negative exponent {exp}")
    return base**exp


def iroot(n: int, k: int) -> tuple[int, bool]:
    """Return ``(floor(n ** (1/k)), exact)`` for ``n >= 0`` and ``k >= 1``.

    Newton's method on integers, started from a power of two that is known to
    be at least the root.  From an overestimate the integer Newton step
    decreases strictly until it reaches the floor, so the loop stops on the
    first non-decreasing step rather than on a residual tolerance.
    """
    if k < 1:
        raise ValueError(f"root index must be >= 1, got {k}")
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n < 2:
        return n, True
    x = 1 << -(-n.bit_length() // k)
    km1 = k - 1
    while True:
        y = (km1 * x + n // x**km1) // k
        if y >= x:
            break
        x = y
    return x, x**k == n


@dataclass(frozen=True, order=False)
class FixedPoint:
    """Exact decimal ``mantissa * 10**-scale``."""

    mantissa: int
    scale: int = 0

    def __post_init__(self) -> None:
        if self.scale < 0:
            raise ValueError("scale must be non-negative")

    @classmethod
    def from_int(cls, value: int, scale: int = 0) -> FixedPoint:
        return cls(value * 10**scale, scale)

    @classmethod
    def parse(cls, text: str) -> FixedPoint:
        text = text.strip()
        whole, _, frac = text.partition(".")
        return cls(from_decimal(whole + frac), len(frac))

    def rescale(self, scale: int) -> FixedPoint:
        """Change scale; only exact (widening) changes are allowed."""
        if scale < self.scale:
            q, r = divmod(self.mantissa, 10 ** (self.scale - scale))
            if r:
                raise ValueError("narrowing rescale would lose digits")
            return FixedPoint(q, scale)
        return FixedPoint(self.mantissa * 10 ** (scale - self.scale), scale)

    def ulp(self) -> FixedPoint:
        return FixedPoint(1, self.scale)

    def __str__(self) -> str:
        if self.scale == 0:
            return to_decimal(self.mantissa)
        digits = to_decimal(self.mantissa).rjust(self.scale + 1, "0")
        return f"{digits[:-self.scale]}.{digits[-self.scale:]}"

    def _common(self, other: FixedPoint) -> tuple[int, int]:
        s = max(self.scale, other.scale)
        return (
            self.mantissa * 10 ** (s - self.scale),
            other.mantissa * 10 ** (s - other.scale),
        )

    def __lt__(self, other: FixedPoint) -> bool:
        a, b = self._common(other)
        return a < b

    def __le__(self, other: FixedPoint) -> bool:
        a, b = self._common(other)
        return a <= b

    def __gt__(self, other: FixedPoint) -> bool:
        a, b = self._common(other)
        return a > b

    def __ge__(self, other: FixedPoint) -> bool:
        a, b = self._common(other)
        return a >= b

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FixedPoint):
            return NotImplemented
        a, b = self._common(other)
        return a == b

    def __hash__(self) -> int:
        m, s = self.mantissa, self.scale
        while s and m % 10 == 0:
            m //= 10
            s -= 1
        return hash((m, s))


def cbrt_directed(x: FixedPoint, target_scale: int, direction: Rounding) -> FixedPoint:
    """Cube root of ``x`` rounded onto the ``10**-target_scale`` grid.

    ``DOWN`` gives the largest grid point ``r`` with ``r**3 <= x``; ``UP`` the
    smallest with ``r**3 >= x``.  Zero maps to exact zero in both directions.
    """
    if x.mantissa < 0:
        raise ValueError("cube root of a negative value")
    if target_scale < 0:
        raise ValueError("target_scale must be non-negative")
    # x * 10**(3t) = m * 10**(3t - s); floor(cbrt(floor(y))) == floor(cbrt(y))
    shift = 3 * target_scale - x.scale
    if shift >= 0:
        root, exact = iroot(x.mantissa * 10**shift, 3)
    else:
        q, rem = divmod(x.mantissa, 10**-shift)
        root, exact = iroot(q, 3)
        exact = exact and rem == 0
    if direction is Rounding.UP and not exact:
        root += 1
    return FixedPoint(root, target_scale)

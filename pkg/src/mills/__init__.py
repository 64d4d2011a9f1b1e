"""Mills' constant, Mills prime chains, prime-gap records and Honaker trios."""

from .arith import FixedPoint, Rounding, cbrt_directed, ipow, iroot
from .constant import ConstantBracket, bracket, digits
from .gaps import GapRecord, cg_threshold, li, maximal_gaps, prime_count, ratio_sup
from .honaker import HonakerTrio
from .millschain import MillsChain
from .primality import PrimalityVerdict, Status, classify, next_prime, sieve_offsets

__all__ = [
    "ConstantBracket",
    "FixedPoint",
    "GapRecord",
    "HonakerTrio",
    "MillsChain",
    "PrimalityVerdict",
    "Rounding",
    "Status",
    "bracket",
    "cbrt_directed",
    "cg_threshold",
    "classify",
    "digits",
    "ipow",
    "iroot",
    "li",
    "maximal_gaps",
    "next_prime",
    "prime_count",
    "ratio_sup",
    "sieve_offsets",
]

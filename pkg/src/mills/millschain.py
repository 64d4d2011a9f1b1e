"""Mills prime chains: ``b_1 = seed`` and ``b_{n+1}`` the least prime above ``b_n**c``.

The chain is stored as its offsets ``a_n = b_{n+1} - b_n**c``; terms are a
derived cache.  Chain files are canonical JSON (sorted keys, fixed indent)
with big values written as decimal strings.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path

from .arith import decimal_length, from_decimal, to_decimal
from .primality import (
    DEFAULT_RNG_SEED,
    PrimalityVerdict,
    SearchExhausted,
    classify,
    default_sieve_limit,
    next_prime,
    sieve_offsets,
)

log = logging.getLogger(__name__)

CHAIN_FORMAT = "mills-chain"
CHAIN_VERSION = 1


class WindowExhausted(Exception):
    """No prime between ``b_n**c`` and ``(b_n + 1)**c``."""

    def __init__(self, n: int):
        super().__init__(f"no prime between b_{n}^c and (b_{n}+1)^c")
        self.n = n


class ChainFileError(ValueError):
    pass


@dataclass(frozen=True)
class MillsChain:
    c: int = 3
    seed: int = 2
    offsets: tuple[int, ...] = ()
    # one verdict per term (seed included); empty when unknown
    statuses: tuple[PrimalityVerdict, ...] = ()
    prp_rounds: int = 5
    generator_seed: int = DEFAULT_RNG_SEED

    def __post_init__(self) -> None:
        if self.c < 3:
            raise ValueError("exponent c must be an integer >= 3")
        if self.seed < 2:
            raise ValueError("seed must be >= 2")
        if self.statuses and len(self.statuses) != len(self.offsets) + 1:
            raise ValueError("need one status per term")

    @classmethod
    def from_terms(cls, terms: list[int], c: int = 3, **kw) -> MillsChain:
        offsets = tuple(b - a**c for a, b in zip(terms, terms[1:]))
        return cls(c=c, seed=terms[0], offsets=offsets, **kw)

    @cached_property
    def terms(self) -> tuple[int, ...]:
        out = [self.seed]
        for a in self.offsets:
            out.append(out[-1] ** self.c + a)
        return tuple(out)

    def __len__(self) -> int:
        return len(self.offsets) + 1

    def window(self, b: int) -> int:
        """Width ``(b+1)**c - b**c`` of the interval a successor must fall in."""
        return (b + 1) ** self.c - b**self.c

    def truncated(self, depth: int) -> MillsChain:
        if not 1 <= depth <= len(self):
            raise ValueError(f"depth {depth} outside 1..{len(self)}")
        return replace(
            self,
            offsets=self.offsets[: depth - 1],
            statuses=self.statuses[:depth] if self.statuses else (),
        )

    # -- serialization -------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "format": CHAIN_FORMAT,
            "version": CHAIN_VERSION,
            "c": self.c,
            "seed": to_decimal(self.seed),
            "offsets": [to_decimal(a) for a in self.offsets],
            "statuses": [v.to_dict() for v in self.statuses],
            "prp_rounds": self.prp_rounds,
            "generator_seed": self.generator_seed,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> MillsChain:
        try:
            doc = json.loads(text)
            if not isinstance(doc, dict):
                raise ChainFileError("chain file must hold a JSON object")
            if doc.get("format", CHAIN_FORMAT) != CHAIN_FORMAT:
                raise ChainFileError(f"unexpected format {doc.get('format')!r}")
            if doc["version"] != CHAIN_VERSION:
                raise ChainFileError(f"unsupported chain file version {doc['version']}")
            return cls(
                c=int(doc["c"]),
                seed=from_decimal(str(doc["seed"])),
                offsets=tuple(from_decimal(str(a)) for a in doc["offsets"]),
                statuses=tuple(PrimalityVerdict.from_dict(s) for s in doc.get("statuses", [])),
                prp_rounds=int(doc.get("prp_rounds", 5)),
                generator_seed=int(doc.get("generator_seed", DEFAULT_RNG_SEED)),
            )
        except ChainFileError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ChainFileError(f"malformed chain file: {exc}") from exc

    @classmethod
    def load(cls, path: str | os.PathLike) -> MillsChain:
        return cls.from_json(Path(path).read_text())

    def save(self, path: str | os.PathLike) -> None:
        """Write atomically: temp file in the same directory, then rename."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent or ".")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(self.to_json())
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def start(seed: int = 2, c: int = 3, prp_rounds: int = 5, rng_seed: int = DEFAULT_RNG_SEED) -> MillsChain:
    verdict = classify(seed, prp_rounds, rng_seed)
    if verdict.is_composite:
        raise ValueError(f"seed {to_decimal(seed)} is not prime")
    return MillsChain(c=c, seed=seed, statuses=(verdict,), prp_rounds=prp_rounds, generator_seed=rng_seed)


def extend(
    chain: MillsChain,
    steps: int,
    prp_rounds: int | None = None,
    *,
    threads: int = 1,
    small_prime_limit: int | None = None,
) -> MillsChain:
    """Append ``steps`` terms, each the least prime (or PRP) above ``b_n**c``.

    The search never looks past ``(b_n + 1)**c``; running out of room there
    raises :class:`WindowExhausted`.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rounds = prp_rounds or chain.prp_rounds
    statuses = list(chain.statuses)
    if not statuses:
        statuses = [classify(b, rounds, chain.generator_seed) for b in chain.terms]
    offsets = list(chain.offsets)
    b = chain.terms[-1]
    for _ in range(steps):
        n = len(offsets) + 1
        base = b**chain.c
        try:
            p, verdict = next_prime(
                base,
                rounds,
                chain.window(b) - 1,
                rng_seed=chain.generator_seed,
                small_prime_limit=small_prime_limit,
                threads=threads,
            )
        except SearchExhausted:
            raise WindowExhausted(n) from None
        offsets.append(p - base)
        statuses.append(verdict)
        log.info("a_%d = %d (b_%d has %d digits, %s)", n, p - base, n + 1, decimal_length(p), verdict.status.value)
        b = p
    return replace(chain, offsets=tuple(offsets), statuses=tuple(statuses), prp_rounds=rounds)


@dataclass(frozen=True)
class Violation:
    n: int
    kind: str
    message: str


@dataclass
class VerificationReport:
    depth: int
    violations: list[Violation] = field(default_factory=list)
    statuses: list[PrimalityVerdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify(
    chain: MillsChain,
    prp_rounds: int | None = None,
    *,
    small_prime_limit: int | None = None,
) -> VerificationReport:
    """Re-derive every check on a chain; problems become report entries."""
    rounds = prp_rounds or chain.prp_rounds
    report = VerificationReport(depth=len(chain))
    terms = chain.terms
    for i, b in enumerate(terms, start=1):
        v = classify(b, rounds, chain.generator_seed)
        report.statuses.append(v)
        if v.is_composite:
            report.violations.append(Violation(i, "term-not-prime", f"b_{i} is composite ({v.method}, witness {v.detail})"))
        if chain.statuses and i <= len(chain.statuses) and chain.statuses[i - 1].status != v.status:
            report.violations.append(
                Violation(i, "status-mismatch", f"b_{i} recorded {chain.statuses[i - 1].status.value}, now {v.status.value}")
            )

    for n, a in enumerate(chain.offsets, start=1):
        b = terms[n - 1]
        base = b**chain.c
        if not 0 < a < chain.window(b):
            report.violations.append(Violation(n, "window", f"a_{n} = {a} outside (0, (b_{n}+1)^c - b_{n}^c)"))
            continue
        if a == 1:
            continue
        limit = small_prime_limit if small_prime_limit is not None else default_sieve_limit(base)
        limit = min(limit, math.isqrt(base))
        for o in sieve_offsets(base, a - 1, limit):
            if not classify(base + o, rounds, chain.generator_seed).is_composite:
                report.violations.append(
                    Violation(n, "minimality", f"b_{n}^c + {o} is prime and smaller than b_{n + 1}")
                )
                break
    return report


def digit_counts(chain: MillsChain) -> list[int]:
    return [decimal_length(b) for b in chain.terms]

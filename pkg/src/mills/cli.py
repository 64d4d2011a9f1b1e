"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or input error, 3 an
internal invariant was violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from . import constant, gaps, honaker, lemmas, millschain
from .arith import to_decimal
from .primality import DEFAULT_RNG_SEED
from .sieve import DEFAULT_SEGMENT

SCHEMA = "mills-cli/1"

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    prp_rounds: int = 5
    rng_seed: int = DEFAULT_RNG_SEED
    threads: int = 1
    segment_size: int = DEFAULT_SEGMENT
    output_format: str = "text"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        threads = (os.cpu_count() or 1) if args.threads == "auto" else int(args.threads)
        if args.prp_rounds < 1 or threads < 1 or args.segment_size < 2:
            raise ValueError("--prp-rounds, --threads and --segment-size must be positive")
        return cls(args.prp_rounds, args.seed, threads, args.segment_size, args.format)


class Output:
    """Collects a result and renders it as text or JSON with the config header."""

    def __init__(self, command: str, config: RunConfig):
        self.command = command
        self.config = config
        self.result: dict = {}
        self.lines: list[str] = []
        self.ok = True

    def emit(self) -> None:
        if self.config.output_format == "json":
            doc = {
                "schema": SCHEMA,
                "command": self.command,
                "config": asdict(self.config),
                "ok": self.ok,
                "result": self.result,
            }
            sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        else:
            cfg = " ".join(f"{k}={v}" for k, v in asdict(self.config).items())
            sys.stdout.write(f"# {self.command} | {cfg}\n")
            for line in self.lines:
                sys.stdout.write(line + "\n")


def _reference_chain_path() -> Path:
    return Path(str(resources.files("mills").joinpath("data/reference_chain.json")))


def _load_chain(path: str | None) -> millschain.MillsChain:
    return millschain.MillsChain.load(path or _reference_chain_path())


def _verdict_text(v) -> str:
    return f"{v.status.value} ({v.method})"


# -- chain ------------------------------------------------------------------


def cmd_chain(args, cfg: RunConfig, out: Output) -> int:
    if args.action == "extend":
        path = Path(args.chain_file) if args.chain_file else None
        if path is not None and path.exists() and not args.fresh:
            chain = millschain.MillsChain.load(path)
        else:
            chain = millschain.start(args.start, args.c, cfg.prp_rounds, cfg.rng_seed)
        chain = millschain.extend(chain, args.steps, cfg.prp_rounds, threads=cfg.threads)
        if path is not None:
            chain.save(path)
    else:
        chain = _load_chain(args.chain_file)

    counts = millschain.digit_counts(chain)
    out.result = {
        "c": chain.c,
        "seed": to_decimal(chain.seed),
        "offsets": [to_decimal(a) for a in chain.offsets],
        "digit_counts": counts,
    }
    out.lines.append(f"c = {chain.c}, b_1 = {chain.seed}")
    for n, a in enumerate(chain.offsets, 1):
        out.lines.append(f"a_{n} = {a}  (b_{n + 1}: {counts[n]} digits)")

    if args.action == "verify":
        report = millschain.verify(chain, cfg.prp_rounds)
        out.ok = report.ok
        out.result["statuses"] = [v.to_dict() for v in report.statuses]
        out.result["violations"] = [asdict(v) for v in report.violations]
        for v in report.violations:
            out.lines.append(f"VIOLATION n={v.n} {v.kind}: {v.message}")
        out.lines.append(f"verify: {'ok' if report.ok else 'FAILED'} ({len(report.violations)} violations)")
        return EXIT_OK if report.ok else EXIT_CHECK

    if chain.statuses:
        out.result["statuses"] = [v.to_dict() for v in chain.statuses]
    if args.action == "show" and args.terms:
        out.result["terms"] = [to_decimal(b) for b in chain.terms]
        for n, b in enumerate(chain.terms, 1):
            out.lines.append(f"b_{n} = {to_decimal(b)}")
    for n, v in enumerate(chain.statuses, 1):
        out.lines.append(f"b_{n}: {_verdict_text(v)}")
    return EXIT_OK


# -- digits -----------------------------------------------------------------


def cmd_digits(args, cfg: RunConfig, out: Output) -> int:
    chain = _load_chain(args.chain_file)
    res = constant.digits(chain, args.requested, args.scale)
    out.result = {
        "digits": res.digits,
        "requested": res.requested,
        "guaranteed": res.guaranteed,
        "depth": res.depth,
        "scale": res.scale,
        "short": res.short,
    }
    header = f"# depth={res.depth} scale={res.scale} guaranteed={res.guaranteed} requested={res.requested}"
    body = constant.group_digits(res.digits) if args.grouped else res.digits
    out.lines.append(header[2:])
    if res.short:
        out.lines.append(f"SHORT: chain pins only {res.guaranteed} digits")
    out.lines.append(body)
    status = EXIT_OK
    if args.check:
        ref = constant.reference_digits()
        bad = constant.first_mismatch(res.digits, ref)
        compared = min(len(res.digits), len(ref))
        out.result["check"] = {"compared_chars": compared, "first_mismatch": bad}
        if bad is not None or res.short:
            out.ok = False
            status = EXIT_CHECK
            where = f"mismatch at character {bad}" if bad is not None else "shortfall"
            out.lines.append(f"check: FAILED ({where})")
        else:
            out.lines.append(f"check: ok ({compared} characters agree with the reference expansion)")
    if args.output:
        Path(args.output).write_text(header + "\n" + body + "\n")
    return status


# -- gaps / cubes -------------------------------------------------------------


def _record_dict(r: gaps.GapRecord) -> dict:
    return {"p": r.p, "next": r.next, "gap": r.gap, "ratio": r.ratio}


def cmd_gaps(args, cfg: RunConfig, out: Output) -> int:
    if args.action == "maximal":
        recs = gaps.maximal_gaps(args.limit, cfg.segment_size, cfg.threads)
        out.result = {"limit": args.limit, "records": [_record_dict(r) for r in recs]}
        out.lines += gaps.format_gap_table(recs).rstrip("\n").splitlines()
        if args.export:
            Path(args.export).write_text(gaps.format_gap_table(recs))
        return EXIT_OK
    if args.action == "ratio-sup":
        ratio, rec = gaps.ratio_sup(args.lo, args.hi, cfg.segment_size, cfg.threads)
        out.result = {"lo": args.lo, "hi": args.hi, "ratio": ratio, "attained_at": _record_dict(rec)}
        out.lines.append(f"sup gap/log^2 p over [{args.lo}, {args.hi}) = {ratio:.10f} at p={rec.p} gap={rec.gap}")
        if args.bound is not None:
            out.ok = ratio < args.bound
            out.lines.append(f"below {args.bound}: {'yes' if out.ok else 'NO'}")
            return EXIT_OK if out.ok else EXIT_CHECK
        return EXIT_OK
    if args.action == "schoenfeld":
        report = gaps.schoenfeld_check(args.x, segment_size=cfg.segment_size, threads=cfg.threads)
        out.ok = report.ok
        out.result = {"rows": [asdict(r) for r in report.rows]}
        for r in report.rows:
            if r.pi is None:
                out.lines.append(f"x={r.x}: FAIL ({r.note})")
            else:
                out.lines.append(
                    f"x={r.x} pi={r.pi} li={r.li:.6f} bound={r.bound:.6f} slack={r.slack:.6f} {'pass' if r.passed else 'FAIL'}"
                )
        return EXIT_OK if report.ok else EXIT_CHECK
    # verify-table
    rows = gaps.parse_gap_table(Path(args.table).read_text())
    problems = gaps.check_gap_table(rows, args.scan_limit, cfg.prp_rounds)
    out.ok = not problems
    out.result = {"rows": len(rows), "problems": problems}
    out.lines += problems or [f"{len(rows)} rows verified"]
    return EXIT_OK if out.ok else EXIT_CHECK


def cmd_cubes(args, cfg: RunConfig, out: Output) -> int:
    report = gaps.cube_interval_check(args.max_x, args.min_x, cfg.prp_rounds)
    out.ok = report.ok
    out.result = {
        "min_x": report.x_min,
        "max_x": report.x_max,
        "checked": report.checked,
        "failures": report.failures,
        "widest": {"x": report.widest[0], "offset": report.widest[1]},
    }
    if report.ok:
        out.lines.append(f"prime found in (x^3, (x+1)^3) for all {report.checked} x in [{report.x_min}, {report.x_max}]")
        out.lines.append(f"largest offset to first prime: {report.widest[1]} at x={report.widest[0]}")
        return EXIT_OK
    out.lines.append(f"NO PRIME between consecutive cubes at x = {report.failures}")
    return EXIT_CHECK


# -- honaker / lemma -----------------------------------------------------------


def cmd_honaker(args, cfg: RunConfig, out: Output) -> int:
    if args.action == "threshold":
        t = honaker.finiteness_bound(args.M)
        out.result = {"M": args.M, "threshold": t}
        out.lines.append(f"M={args.M}: any trio has p <= {t}")
        return EXIT_OK
    default = (args.length, args.sign, args.addend, args.divisor_index) == (3, 1, 1, 0)
    found = honaker.search_tuples(
        args.lo, args.hi, args.length, args.sign, args.addend, args.divisor_index, cfg.segment_size, cfg.threads
    )
    items = []
    for t in found:
        item = {"primes": list(t)}
        if default and t[0] > 2:
            trio = honaker.HonakerTrio(*t)
            item.update(k=trio.k, l=trio.l, witness=honaker.divisibility_witness(trio))
        items.append(item)
        out.lines.append(" ".join(map(str, t)))
    out.result = {"lo": args.lo, "hi": args.hi, "count": len(found), "tuples": items}
    out.lines.append(f"# {len(found)} found in [{args.lo}, {args.hi})")
    return EXIT_OK


def cmd_lemma(args, cfg: RunConfig, out: Output) -> int:
    res = lemmas.xc_inequality_holds(lemmas.XcInstance(args.x, args.c))
    out.ok = res.holds
    out.result = asdict(res)
    out.lines.append(f"1 + x^c + x^(c-1) = {res.lhs!r} < (1+x)^c = {res.rhs!r}: {res.holds} (margin {res.margin!r}, {res.bits} bits)")
    return EXIT_OK if res.holds else EXIT_INTERNAL


# -- parser ---------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--prp-rounds", type=int, default=5)
    g.add_argument("--seed", type=int, default=DEFAULT_RNG_SEED, help="seed for random PRP bases")
    g.add_argument("--threads", default="1", help="worker count or 'auto'")
    g.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT)
    g.add_argument("--format", choices=("text", "json"), default="text")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="mills", description="Mills' constant, prime gaps and Honaker trios.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    chain = sub.add_parser("chain", help="build, verify or show a Mills prime chain")
    csub = chain.add_subparsers(dest="action", required=True)
    ext = csub.add_parser("extend", parents=[common])
    ext.add_argument("--chain-file", help="read if present, then write back atomically")
    ext.add_argument("--steps", type=int, required=True)
    ext.add_argument("--start", type=int, default=2, help="b_1 for a new chain")
    ext.add_argument("--c", type=int, default=3)
    ext.add_argument("--fresh", action="store_true", help="ignore an existing chain file")
    for name in ("verify", "show"):
        sp = csub.add_parser(name, parents=[common])
        sp.add_argument("--chain-file", help="default: bundled reference chain")
        if name == "show":
            sp.add_argument("--terms", action="store_true", help="print every term in full")

    dg = sub.add_parser("digits", parents=[common], help="guaranteed digits of Mills' constant")
    dg.add_argument("requested", type=int)
    dg.add_argument("--chain-file", help="default: bundled reference chain")
    dg.add_argument("--check", action="store_true", help="compare against the published 600-place expansion")
    dg.add_argument("--grouped", action="store_true", help="10-digit groups, 5 per row")
    dg.add_argument("--scale", type=int, help="working precision in decimal places")
    dg.add_argument("--output", help="also write the digits to this file")

    gp = sub.add_parser("gaps", help="prime-gap scans")
    gsub = gp.add_subparsers(dest="action", required=True)
    mx = gsub.add_parser("maximal", parents=[common])
    mx.add_argument("--limit", type=int, required=True)
    mx.add_argument("--export", help="write the 'p gap ratio' table here")
    rs = gsub.add_parser("ratio-sup", parents=[common])
    rs.add_argument("--lo", type=int, default=11)
    rs.add_argument("--hi", type=int, required=True)
    rs.add_argument("--bound", type=float, help="fail unless the supremum is below this")
    sc = gsub.add_parser("schoenfeld", parents=[common])
    sc.add_argument("--x", type=int, nargs="+", default=[2657, 10**4, 10**6, 10**8])
    vt = gsub.add_parser("verify-table", parents=[common])
    vt.add_argument("table")
    vt.add_argument("--scan-limit", type=int)

    cb = sub.add_parser("cubes", help="primes between consecutive cubes")
    cbsub = cb.add_subparsers(dest="action", required=True)
    cc = cbsub.add_parser("check", parents=[common])
    cc.add_argument("--max-x", type=int, required=True)
    cc.add_argument("--min-x", type=int, default=1)

    hk = sub.add_parser("honaker", help="Honaker trios")
    hsub = hk.add_subparsers(dest="action", required=True)
    hs = hsub.add_parser("search", parents=[common])
    hs.add_argument("--lo", type=int, default=2)
    hs.add_argument("--hi", type=int, required=True)
    hs.add_argument("--length", type=int, default=3)
    hs.add_argument("--sign", type=int, choices=(1, -1), default=1)
    hs.add_argument("--addend", type=int, default=1)
    hs.add_argument("--divisor-index", type=int, default=0)
    ht = hsub.add_parser("threshold", parents=[common])
    ht.add_argument("--M", type=float, required=True)

    lm = sub.add_parser("lemma", help="analytic inequalities")
    lsub = lm.add_subparsers(dest="action", required=True)
    xc = lsub.add_parser("xc", parents=[common])
    xc.add_argument("--x", required=True)
    xc.add_argument("--c", required=True)
    return parser


COMMANDS = {
    "chain": cmd_chain,
    "digits": cmd_digits,
    "gaps": cmd_gaps,
    "cubes": cmd_cubes,
    "honaker": cmd_honaker,
    "lemma": cmd_lemma,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    name = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    try:
        cfg = RunConfig.from_args(args)
        out = Output(name, cfg)
        status = COMMANDS[args.command](args, cfg, out)
    except (millschain.ChainFileError, FileNotFoundError, ValueError) as exc:
        print(f"mills: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except millschain.WindowExhausted as exc:
        print(f"mills: NO PRIME IN CUBE WINDOW: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (honaker.InvariantViolation, lemmas.PrecisionExhausted) as exc:
        print(f"mills: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out.emit()
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``pfq <certificate> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .certificates import CERTIFICATES, RunConfig, run_certificate
from .errors import PfqError

EXIT_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pfq", description="Reproducible certificates for Pfaffian quartic threefolds.")
    ap.add_argument("certificate", help="one of: " + ", ".join(CERTIFICATES))
    ap.add_argument("--matrix", help="skew matrix JSON file, or 'm0' (default)")
    ap.add_argument("--poly", help="polynomial file or string, or 'f0' (default) / 'fermat'")
    ap.add_argument("--ideal", help="ideal JSON file or builtin name")
    ap.add_argument("--complex", help="complex JSON file or builtin name")
    ap.add_argument("--prime", type=int, help="work over GF(P) only (default: 31991, plus 104729 where two primes are used)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tmax", type=int, help="largest degree or twist to tabulate")
    ap.add_argument("--count", type=int, help="points to sample, or seeds to run")
    ap.add_argument("--expect", help="claimed value (polynomial for pfaffian-identity, comma tuple or integer elsewhere)")
    ap.add_argument("--chern", help="Chern data as K,ALPHA")
    ap.add_argument("--twist", type=int)
    ap.add_argument("--dim", type=int, help="projective dimension for slice-degree")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--cache-dir", default="pfcache", help="Groebner basis cache (default: ./pfcache)")
    ap.add_argument("--no-cache", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.certificate not in CERTIFICATES:
        print(f"pfq: unknown certificate {args.certificate!r}; choose from {', '.join(CERTIFICATES)}",
              file=sys.stderr)
        return EXIT_ERROR
    cfg = RunConfig(matrix=args.matrix, poly=args.poly, ideal=args.ideal, complex=args.complex,
                    prime=args.prime, seed=args.seed, tmax=args.tmax, count=args.count,
                    cache_dir=None if args.no_cache else args.cache_dir, expect=args.expect,
                    chern=args.chern, twist=args.twist, dim=args.dim)
    try:
        report = run_certificate(args.certificate, cfg)
    except (PfqError, OSError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"pfq: {args.certificate}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    print(f"pfq: {args.certificate}: {report.status} ({report.runtime_ms} ms)", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

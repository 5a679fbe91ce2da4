"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical
failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import KEYS, parse_config
from .errors import ConfigError, KGError
from .reporting import emit, run_spectrum

log = logging.getLogger("kgnc")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kgnc",
        description="Klein-Gordon Coulomb spectrum with first-order non-commutative splitting.",
    )
    parser.add_argument("--config", metavar="PATH", help="flat 'key = value' file; flags override it")
    for key in KEYS:
        parser.add_argument("--" + key.replace("_", "-"), dest=key, metavar="VALUE", default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    source = ""
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                source = fh.read()
        except OSError as exc:
            print(f"kgnc: cannot read config {args.config}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO
    overrides = {key: getattr(args, key) for key in KEYS if getattr(args, key) is not None}
    try:
        config = parse_config(source, overrides)
    except ConfigError as exc:
        print(f"kgnc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        table = run_spectrum(config)
    except (KGError, ArithmeticError) as exc:
        print(f"kgnc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.info("%d levels, %d discrepancy records", len(table.levels), len(table.discrepancies))

    try:
        text = emit(table, config.format, config.out)
    except OSError as exc:
        print(f"kgnc: cannot write {config.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    if config.out in (None, "-"):
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

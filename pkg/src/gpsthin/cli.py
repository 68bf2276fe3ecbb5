"""Command-line entry point: ``gpsthin --config run.json``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import MODES, parse_config
from .errors import GpsThinError, SchemaViolation
from .pipeline import EXIT_CONFIG, run_pipeline
from .report import serialize_report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gpsthin",
                                description="Build and certify bent Gromov--Piatetski-Shapiro groups.")
    p.add_argument("--config", required=True, type=Path, help="JSON pipeline config")
    p.add_argument("--mode", choices=MODES, help="override the config's mode")
    p.add_argument("--max-word-length", type=int, help="override words.max_word_length")
    p.add_argument("--output", type=Path, help="report path (default: config 'output', else stdout)")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    p.add_argument("-v", "--verbose", action="store_true", help="log stage progress to stderr")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(args.config.read_bytes())
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SchemaViolation as e:
        for ptr, msg in e.errors:
            print(f"config error at {ptr or '/'}: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    if args.mode:
        cfg.mode = args.mode
    if args.max_word_length is not None:
        if args.max_word_length < 0:
            print("error: --max-word-length must be >= 0", file=sys.stderr)
            return EXIT_CONFIG
        cfg.max_word_length = args.max_word_length
    if cfg.mode != "enumerate" and cfg.gps is None:
        print(f"config error at /gps: mode {cfg.mode!r} needs a gps section", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run_pipeline(cfg)
    except GpsThinError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    data = serialize_report(result.report)
    out = args.output or (Path(cfg.output) if cfg.output else None)
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        out.write_bytes(data)
    if not args.quiet:
        summ = result.report.summary()
        counts = ", ".join(f"{k}={v}" for k, v in summ["counts"].items() if v)
        failed = f" failed: {', '.join(summ['failed'])}" if summ["failed"] else ""
        print(f"{cfg.mode}: {summ['overall']} ({counts}) exit={result.exit_code}{failed}",
              file=sys.stderr if out is None else sys.stdout)
    return result.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

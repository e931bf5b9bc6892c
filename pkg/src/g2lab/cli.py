"""Command line entry point: ``g2lab verify`` and ``g2lab torsion``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .report import emit
from .g2sphere import DegradedFitError
from .riemann4 import CATALOG_NAMES, ChartDomainError, MetricError, ParseError
from .verify import RunConfig, run_torsion, run_verify

__all__ = ["build_parser", "config_from_args", "main"]


def _tol(text: str) -> tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VAL, got {text!r}")
    try:
        return key.strip(), float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {val!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--metric", choices=CATALOG_NAMES, help="catalog metric (default flat)")
    src.add_argument("--config", metavar="PATH", help="TOML file with a custom metric")
    common.add_argument("--r1", type=float, default=1.0, help="first radius for s2xs2")
    common.add_argument("--r2", type=float, default=2.0, help="second radius for s2xs2")
    common.add_argument("--samples", type=int, default=50, metavar="N")
    common.add_argument("--seed", type=int, default=0, metavar="N")
    common.add_argument("--fd-step", type=float, default=1e-4, metavar="H")
    common.add_argument("--tol", type=_tol, action="append", default=[], metavar="KEY=VAL",
                        help="override the tolerance of a check id (repeatable)")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="g2lab", description=__doc__)
    p.add_argument("--version", action="version", version=f"g2lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every invariant check on one metric")
    sub.add_parser("torsion", parents=[common], help="per-point torsion table")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(command=ns.command, metric=ns.metric or "flat", config=ns.config,
                     r1=ns.r1, r2=ns.r2, samples=ns.samples, seed=ns.seed, fd_step=ns.fd_step,
                     tolerances=dict(ns.tol), out=ns.out, format=ns.format)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        rep = run_torsion(cfg) if cfg.command == "torsion" else run_verify(cfg)
    except ParseError as exc:
        print(f"g2lab: metric parse error: {exc}", file=sys.stderr)
        return 2
    except DegradedFitError as exc:
        print(f"g2lab: degraded torsion fit: {exc}", file=sys.stderr)
        return 3
    except (MetricError, ChartDomainError, OSError, ValueError) as exc:
        print(f"g2lab: {exc}", file=sys.stderr)
        return 2
    text = emit(rep, cfg.format, cfg.out)
    if cfg.out is None:
        sys.stdout.write(text)
    if ns.verbose:
        for k, v in rep.timings.items():
            logging.getLogger("g2lab").info("%s %.3f", k, v)
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

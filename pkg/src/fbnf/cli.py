"""Command-line front end.

``fbnf eval`` evaluates expressions for a selected product, one output line
per input: the value, or exactly ``Syntax Error``.  ``fbnf check`` validates
the product grammar a configuration selects, and ``fbnf features`` lists the
pool's feature names.  Exit status: 0 success, 1 a batch expression failed
to parse, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import IO

from .calculators import PRODUCT_CONFIGS, build_product, calculator_pool
from .engine import Value, parse_full
from .grammar import ERROR, left_recursion_diagnostics, validate_grammar
from .spl import FeatureConfig, FilterBrokeGrammar, MalformedConfig, load_config

__all__ = ["run", "main", "format_value"]

SYNTAX_ERROR = "Syntax Error"


def format_value(v: float) -> str:
    """Calculator-display formatting: shortest round-trip decimal,
    integral values without a decimal point."""
    if math.isfinite(v) and abs(v) < 1e16 and v == int(v):
        return str(int(v))
    return repr(v)


def _config_from_args(args, err: IO[str]) -> FeatureConfig | None:
    if args.product is not None:
        config = PRODUCT_CONFIGS.get(args.product)
        if config is None:
            print(f"unknown product {args.product!r}; choose from: "
                  f"{', '.join(sorted(PRODUCT_CONFIGS))}", file=err)
            return None
        return config
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"cannot read config {args.config!r}: {e.strerror}", file=err)
        return None
    try:
        config, warnings = load_config(text)
    except MalformedConfig as e:
        print(f"malformed config {args.config!r}: {e}", file=err)
        return None
    for w in warnings:
        print(f"warning: {w}", file=err)
    return config


def _cmd_eval(args, out: IO[str], err: IO[str], in_stream: IO[str]) -> int:
    if args.repl and args.expressions:
        print("give either expressions or --repl, not both", file=err)
        return 2
    if not args.repl and not args.expressions:
        print("nothing to evaluate: pass expressions or --repl", file=err)
        return 2
    config = _config_from_args(args, err)
    if config is None:
        return 2
    try:
        product = build_product(config)
    except FilterBrokeGrammar as e:
        print(str(e), file=err)
        return 2

    def show(line: str) -> bool:
        outcome = parse_full(product, line)
        if isinstance(outcome, Value):
            print(format_value(outcome.result), file=out)
            return True
        print(SYNTAX_ERROR, file=out)
        return False

    if args.repl:
        for raw in in_stream:
            show(raw.rstrip("\r\n"))
        return 0
    ok = True
    for expression in args.expressions:
        ok = show(expression) and ok
    return 0 if ok else 1


def _cmd_check(args, out: IO[str], err: IO[str]) -> int:
    config = _config_from_args(args, err)
    if config is None:
        return 2
    try:
        product = build_product(config)
        diagnostics = validate_grammar(product)
    except FilterBrokeGrammar as e:
        diagnostics = e.diagnostics
        product = None
    if product is not None:
        diagnostics = diagnostics + left_recursion_diagnostics(product)
    for d in diagnostics:
        where = f" [rule {d.rule}]" if d.rule else ""
        print(f"{d.severity}: {d.code}{where}: {d.message}", file=out)
    if any(d.severity == ERROR for d in diagnostics):
        return 1
    if not diagnostics:
        print("ok", file=out)
    return 0


def _cmd_features(out: IO[str]) -> int:
    pool = calculator_pool()
    names = sorted({r.feature for r in pool.rules if r.feature is not None})
    for name in names:
        print(name, file=out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fbnf",
                                     description="Calculator product line over functional BNF.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate expressions for one product")
    which = p_eval.add_mutually_exclusive_group(required=True)
    which.add_argument("--product", help="named preset: " + ", ".join(sorted(PRODUCT_CONFIGS)))
    which.add_argument("--config", help="path to a product configuration file")
    p_eval.add_argument("--repl", action="store_true",
                        help="read expressions from stdin, one per line")
    p_eval.add_argument("expressions", nargs="*", help="expressions to evaluate")

    p_check = sub.add_parser("check", help="validate the grammar a config selects")
    which = p_check.add_mutually_exclusive_group(required=True)
    which.add_argument("--product")
    which.add_argument("--config")

    sub.add_parser("features", help="list feature names available in the pool")
    return parser


def run(argv: list[str] | None = None, *,
        out: IO[str] | None = None, err: IO[str] | None = None,
        in_stream: IO[str] | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    in_stream = sys.stdin if in_stream is None else in_stream
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "eval":
        return _cmd_eval(args, out, err, in_stream)
    if args.command == "check":
        return _cmd_check(args, out, err)
    return _cmd_features(out)


def main() -> None:
    sys.exit(run())

"""The calculator product line: one rule pool, several products.

The unannotated core covers the four arithmetic operations with standard
precedence and left associativity (accumulator-threaded suffix strata),
parenthesized subexpressions, and decimal numbers built character by
character.  Three features extend it:

* ``scientific``  -- sin/cos/tan application (radians).
* ``financial``   -- postfix ``%``, reducing ``v%`` to ``v/100``; binds
  tighter than ``+``/``-`` and composes with ``*`` and ``/``.
* ``hexadecimal`` -- uppercase hex numerals.  The hex rule is wired in
  ahead of the decimal number rule, so under a hex product a numeral like
  "11" reads as base 16 (first full match wins); inputs only the decimal
  rules can match, such as fractions, still fall through to them.  Hex
  numerals are integral: there is no fractional hex syntax.

Input is keypad-style: no whitespace, no unary minus.
"""

from __future__ import annotations

from .grammar import (
    EMPTY, Grammar, arg, bind, call, grammar, lit, nt, pv, rule, seq, var,
)
from .spl import FeatureConfig, filter_by_features

__all__ = ["calculator_pool", "build_product", "PRODUCT_CONFIGS", "FEATURES"]

FEATURES = ("scientific", "financial", "hexadecimal")

PRODUCT_CONFIGS = {
    "basic": FeatureConfig("basic", frozenset()),
    "scientific": FeatureConfig("scientific", frozenset({"scientific"})),
    "financial": FeatureConfig("financial", frozenset({"financial"})),
    "hex": FeatureConfig("hex", frozenset({"hexadecimal"})),
}


def _function_rule(name: str) -> "rule":
    return rule(
        "primary",
        pv(seq(name, "(", bind("e", nt("expr")), ")"), call(name, var("e"))),
        feature="scientific",
    )


def calculator_pool() -> Grammar:
    rules = [
        # additive stratum, accumulator-threaded for left associativity
        rule("expr",
             pv(seq(bind("a", nt("multExpr")),
                    bind("s", nt("exprSuffix", var("a")))),
                var("s"))),
        rule("exprSuffix",
             pv(seq("+", bind("b", nt("multExpr")),
                    bind("s", nt("exprSuffix", arg("acc") + var("b")))),
                var("s")),
             params=("acc",)),
        rule("exprSuffix",
             pv(seq("-", bind("b", nt("multExpr")),
                    bind("s", nt("exprSuffix", arg("acc") - var("b")))),
                var("s")),
             params=("acc",)),
        rule("exprSuffix", pv(EMPTY, arg("acc")), params=("acc",)),

        # multiplicative stratum
        rule("multExpr",
             pv(seq(bind("a", nt("postfix")),
                    bind("s", nt("multSuffix", var("a")))),
                var("s"))),
        rule("multSuffix",
             pv(seq("*", bind("b", nt("postfix")),
                    bind("s", nt("multSuffix", arg("acc") * var("b")))),
                var("s")),
             params=("acc",)),
        rule("multSuffix",
             pv(seq("/", bind("b", nt("postfix")),
                    bind("s", nt("multSuffix", arg("acc") / var("b")))),
                var("s")),
             params=("acc",)),
        rule("multSuffix", pv(EMPTY, arg("acc")), params=("acc",)),

        # postfix percent, financial only; tried before the plain operand
        rule("postfix", pv(seq(bind("p", nt("primary")), "%"), var("p") / 100),
             feature="financial"),
        rule("postfix", pv(seq(bind("p", nt("primary"))), var("p"))),

        _function_rule("sin"),
        _function_rule("cos"),
        _function_rule("tan"),

        rule("primary", pv(seq("(", bind("e", nt("expr")), ")"), var("e"))),
        rule("primary", pv(seq(bind("n", nt("number"))), var("n"))),

        # hex numerals shadow decimal ones by rule order under hex products
        rule("number", pv(seq(bind("h", nt("hexInteger"))), var("h")),
             feature="hexadecimal"),
        rule("number",
             pv(seq(bind("i", nt("integer")), bind("r", nt("fractionOpt", var("i")))),
                var("r"))),

        # decimal integers, digit by digit: acc*10 + d
        rule("integer",
             pv(seq(bind("d", nt("digit")), bind("s", nt("integerSuffix", var("d")))),
                var("s"))),
        rule("integerSuffix",
             pv(seq(bind("d", nt("digit")),
                    bind("s", nt("integerSuffix", arg("acc") * 10 + var("d")))),
                var("s")),
             params=("acc",)),
        rule("integerSuffix", pv(EMPTY, arg("acc")), params=("acc",)),

        # optional fraction: digits accumulate as an integer f with its scale,
        # so the value needs exactly one division (whole + f/scale)
        rule("fractionOpt",
             pv(seq(".", bind("d", nt("digit")),
                    bind("s", nt("fractionDigits", var("d"), 10))),
                arg("whole") + var("s")),
             params=("whole",)),
        rule("fractionOpt", pv(EMPTY, arg("whole")), params=("whole",)),
        rule("fractionDigits",
             pv(seq(bind("d", nt("digit")),
                    bind("s", nt("fractionDigits", arg("f") * 10 + var("d"),
                                 arg("scale") * 10))),
                var("s")),
             params=("f", "scale")),
        rule("fractionDigits", pv(EMPTY, arg("f") / arg("scale")),
             params=("f", "scale")),
    ]

    for d in "0123456789":
        rules.append(rule("digit", pv(lit(d), float(d))))

    rules.extend([
        rule("hexInteger",
             pv(seq(bind("d", nt("hexDigit")), bind("s", nt("hexSuffix", var("d")))),
                var("s")),
             feature="hexadecimal"),
        rule("hexSuffix",
             pv(seq(bind("d", nt("hexDigit")),
                    bind("s", nt("hexSuffix", arg("acc") * 16 + var("d")))),
                var("s")),
             params=("acc",), feature="hexadecimal"),
        rule("hexSuffix", pv(EMPTY, arg("acc")), params=("acc",),
             feature="hexadecimal"),
        rule("hexDigit", pv(seq(bind("d", nt("digit"))), var("d")),
             feature="hexadecimal"),
    ])
    for value, ch in enumerate("ABCDEF", start=10):
        rules.append(rule("hexDigit", pv(lit(ch), float(value)),
                          feature="hexadecimal"))

    return grammar("calculator", rules, start="expr")


def build_product(config: FeatureConfig) -> Grammar:
    """Assemble one product grammar from the pool; the CLI's single entry point."""
    return filter_by_features(calculator_pool(), config)

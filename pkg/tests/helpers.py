"""Shared test fixtures: independent oracles, generators, small grammars.

The evaluators here are deliberately written against tokens or plain
strings, not against the engine's derivation machinery, so they can
disagree with it if either side is wrong.
"""

from __future__ import annotations

import itertools
import math
import random

from fbnf import (
    EMPTY, Alternative, BinaryOp, Concatenation, Grammar, NamedPattern,
    NonTerminal, PatternValue, alt, arg, bind, call, grammar, lit, nt, num,
    pv, rule, seq, var,
)

# ---------------------------------------------------------------------------
# Value comparison (exact doubles, NaN equal to NaN)

def values_equal(a: float, b: float) -> bool:
    return a == b or (math.isnan(a) and math.isnan(b))


def _ref_div(a: float, b: float) -> float:
    try:
        return a / b
    except ZeroDivisionError:
        if a == 0 or math.isnan(a):
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)


# ---------------------------------------------------------------------------
# Token-level shunting-yard evaluator for integer +-*/() expressions

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _tokenize(text: str):
    tokens: list[object] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(float(text[i:j]))
            i = j
        elif c in "+-*/()":
            tokens.append(c)
            i += 1
        else:
            return None
    return tokens


def shunting_yard_eval(text: str) -> float | None:
    """Reference evaluator; None when the expression is malformed."""
    tokens = _tokenize(text)
    if tokens is None or not tokens:
        return None
    output: list[object] = []
    ops: list[str] = []
    prev = None

    def value_like(tok) -> bool:
        return isinstance(tok, float) or tok == ")"

    for tok in tokens:
        if isinstance(tok, float):
            if value_like(prev):
                return None
            output.append(tok)
        elif tok == "(":
            if value_like(prev):
                return None
            ops.append(tok)
        elif tok == ")":
            if not value_like(prev):
                return None
            while ops and ops[-1] != "(":
                output.append(ops.pop())
            if not ops:
                return None
            ops.pop()
        else:
            if not value_like(prev):
                return None
            while ops and ops[-1] != "(" and _PREC[ops[-1]] >= _PREC[tok]:
                output.append(ops.pop())
            ops.append(tok)
        prev = tok
    if not value_like(prev):
        return None
    while ops:
        op = ops.pop()
        if op == "(":
            return None
        output.append(op)

    stack: list[float] = []
    for tok in output:
        if isinstance(tok, float):
            stack.append(tok)
            continue
        b, a = stack.pop(), stack.pop()
        if tok == "+":
            stack.append(a + b)
        elif tok == "-":
            stack.append(a - b)
        elif tok == "*":
            stack.append(a * b)
        else:
            stack.append(_ref_div(a, b))
    return stack[0] if len(stack) == 1 else None


def random_int_expression(rng: random.Random, depth: int = 3) -> str:
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        return str(rng.randint(0, 999))
    if roll < 0.55:
        return "(" + random_int_expression(rng, depth - 1) + ")"
    op = rng.choice("+-*/")
    return random_int_expression(rng, depth - 1) + op + random_int_expression(rng, depth - 1)


# ---------------------------------------------------------------------------
# Strict left-fold evaluator for single-digit op chains (no precedence)

def left_fold_eval(text: str) -> float | None:
    if not text or not text[0].isdigit():
        return None
    acc = float(text[0])
    i = 1
    while i < len(text):
        if i + 1 >= len(text) or text[i] not in "+-*/" or not text[i + 1].isdigit():
            return None
        op, d = text[i], float(text[i + 1])
        if op == "+":
            acc += d
        elif op == "-":
            acc -= d
        elif op == "*":
            acc *= d
        else:
            acc = _ref_div(acc, d)
        i += 2
    return acc


# ---------------------------------------------------------------------------
# Left-recursive fixtures

def lr_plus_grammar() -> Grammar:
    """expr ::= (a=expr, '+', b=multExpr){a+b} | (m=multExpr){m}, digits 1-3."""
    rules = [
        rule("expr", pv(seq(bind("a", nt("expr")), "+", bind("b", nt("multExpr"))),
                        var("a") + var("b"))),
        rule("expr", pv(bind("m", nt("multExpr")), var("m"))),
    ]
    for d in "123":
        rules.append(rule("multExpr", pv(lit(d), float(d))))
    return grammar("lrplus", rules, "expr")


def lr_subdiv_grammar() -> Grammar:
    """Left-recursive chain of '-' and '/' over digits 8 and 2."""
    rules = [
        rule("expr", pv(seq(bind("a", nt("expr")), "-", bind("b", nt("dig"))),
                        var("a") - var("b"))),
        rule("expr", pv(seq(bind("a", nt("expr")), "/", bind("b", nt("dig"))),
                        var("a") / var("b"))),
        rule("expr", pv(bind("d", nt("dig")), var("d"))),
    ]
    for d in "82":
        rules.append(rule("dig", pv(lit(d), float(d))))
    return grammar("lrsubdiv", rules, "expr")


def suffix_form_plus_grammar() -> Grammar:
    """Hand-written accumulator form of the '+' grammar, digits 1-3."""
    rules = [
        rule("expr", pv(seq(bind("a", nt("multExpr")),
                            bind("s", nt("exprSuffix", var("a")))), var("s"))),
        rule("exprSuffix",
             pv(seq("+", bind("b", nt("multExpr")),
                    bind("s", nt("exprSuffix", arg("acc") + var("b")))), var("s")),
             params=("acc",)),
        rule("exprSuffix", pv(EMPTY, arg("acc")), params=("acc",)),
    ]
    for d in "123":
        rules.append(rule("multExpr", pv(lit(d), float(d))))
    return grammar("suffixplus", rules, "expr")


def endless_loop_grammar() -> Grammar:
    """Left recursion with no base case: derivation diverges."""
    return grammar("loop", [rule("s", pv(seq(bind("a", nt("s")), "x"), var("a")))], "s")


# ---------------------------------------------------------------------------
# Zoo of small grammars for oracle-equivalence checks: (name, grammar, alphabet)

def _digits01():
    return [rule("d", pv(lit("0"), 0.0)), rule("d", pv(lit("1"), 1.0))]


def grammar_zoo() -> list[tuple[str, Grammar, str]]:
    zoo: list[tuple[str, Grammar, str]] = []

    zoo.append(("single_terminal",
                grammar("g", [rule("s", pv(lit("a"), 1.0))], "s"), "ab"))
    zoo.append(("empty_string",
                grammar("g", [rule("s", pv(EMPTY, 0.0))], "s"), "a"))
    zoo.append(("choice",
                grammar("g", [rule("s", alt(pv(lit("a"), 1.0), pv(lit("b"), 2.0)))], "s"),
                "ab"))
    zoo.append(("ordered_overlap",
                grammar("g", [rule("s", alt(pv(lit("a"), 1.0), pv(lit("ab"), 2.0)))], "s"),
                "ab"))
    zoo.append(("named_digit",
                grammar("g", [rule("s", pv(bind("x", nt("d")), var("x"))), *_digits01()], "s"),
                "01"))
    zoo.append(("concat_terminals",
                grammar("g", [rule("s", pv(seq("a", "b"), 1.0))], "s"), "ab"))
    zoo.append(("arg_double",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("d")), bind("r", nt("f", var("x") * 2))),
                                 var("r"))),
                    rule("f", pv(lit("!"), arg("k") + 1), params=("k",)),
                    *_digits01(),
                ], "s"), "01!"))
    zoo.append(("count_as",
                grammar("g", [
                    rule("s", pv(seq("a", bind("r", nt("s"))), var("r") + 1)),
                    rule("s", pv(lit("a"), 1.0)),
                ], "s"), "ab"))
    zoo.append(("empty_language",
                grammar("g", [rule("s", pv(seq("a", bind("r", nt("s"))), var("r")))], "s"),
                "a"))
    zoo.append(("nested_parens",
                grammar("g", [
                    rule("s", pv(seq("(", bind("e", nt("s")), ")"), var("e"))),
                    rule("s", pv(lit("x"), 7.0)),
                ], "s"), "()x"))
    zoo.append(("pair_values",
                grammar("g", [
                    rule("s", pv(seq(bind("p", nt("a")), bind("q", nt("a"))),
                                 var("p") * 10 + var("q"))),
                    rule("a", pv(lit("a"), 1.0)),
                    rule("a", pv(lit("b"), 2.0)),
                ], "s"), "ab"))
    zoo.append(("empty_prefix",
                grammar("g", [rule("s", pv(seq(EMPTY, "a"), 5.0))], "s"), "a"))
    zoo.append(("same_name_order",
                grammar("g", [
                    rule("s", pv(lit("aa"), 1.0)),
                    rule("s", pv(lit("a"), 2.0)),
                ], "s"), "a"))
    zoo.append(("two_digit_arg",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("d")), bind("r", nt("t", var("x")))),
                                 var("r"))),
                    rule("t", pv(bind("y", nt("d")), arg("a") * 10 + var("y")),
                         params=("a",)),
                    *_digits01(),
                ], "s"), "01"))
    zoo.append(("builtin_sin",
                grammar("g", [
                    rule("s", pv(seq("s", bind("x", nt("d"))), call("sin", var("x"))),),
                    *_digits01(),
                ], "s"), "s01"))
    zoo.append(("division",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("d")), "/", bind("y", nt("d"))),
                                 var("x") / var("y"))),
                    *_digits01(),
                ], "s"), "01/"))
    zoo.append(("two_args",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("d")), bind("r", nt("p", var("x"), var("x") + 1))),
                                 var("r"))),
                    rule("p", pv(lit("+"), arg("a") + arg("b")), params=("a", "b")),
                    *_digits01(),
                ], "s"), "01+"))
    zoo.append(("backtrack",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("r")), "b"), var("x"))),
                    rule("r", alt(pv(lit("a"), 1.0), pv(lit("ab"), 2.0))),
                ], "s"), "ab"))
    zoo.append(("empty_first_alt",
                grammar("g", [rule("s", alt(pv(EMPTY, 0.0), pv(lit("a"), 1.0)))], "s"),
                "a"))
    zoo.append(("three_way",
                grammar("g", [
                    rule("s", alt(pv(lit("a"), 1.0), pv(lit("b"), 2.0), pv(lit("c"), 3.0))),
                ], "s"), "abc"))
    zoo.append(("multichar_terminal",
                grammar("g", [rule("s", pv(lit("abc"), 3.0))], "s"), "abc"))
    zoo.append(("subtract_pair",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("d")), bind("y", nt("d"))),
                                 var("x") - var("y"))),
                    *_digits01(),
                ], "s"), "01"))
    zoo.append(("nullable_tail_rule",
                grammar("g", [
                    rule("s", pv(seq(bind("x", nt("d")), bind("r", nt("q", var("x")))),
                                 var("r"))),
                    rule("q", pv(seq("=", bind("y", nt("d")),
                                     bind("t", nt("k", arg("a") + var("y")))), var("t")),
                         params=("a",)),
                    rule("k", pv(EMPTY, arg("n") * 2), params=("n",)),
                    *_digits01(),
                ], "s"), "01="))
    return zoo


# ---------------------------------------------------------------------------
# Random (but statically valid) grammar generator for property tests

def random_grammar(rng: random.Random, names: tuple[str, ...] = ("s", "t", "u")) -> Grammar:
    names = names[: rng.randint(1, len(names))]
    counter = itertools.count()

    def gen_expression(bound: frozenset[str], depth: int):
        kinds = ["lit"]
        if bound:
            kinds += ["var", "var"]
        if depth > 0:
            kinds.append("bin")
        kind = rng.choice(kinds)
        if kind == "lit":
            return num(rng.randint(0, 5))
        if kind == "var":
            return var(rng.choice(sorted(bound)))
        return BinaryOp(rng.choice("+-*"),
                        gen_expression(bound, depth - 1),
                        gen_expression(bound, depth - 1))

    def gen_pattern(depth: int, bound: frozenset[str]):
        kinds = ["term", "term", "empty"]
        if depth > 0:
            kinds += ["concat", "named", "named"]
        kind = rng.choice(kinds)
        if kind == "term":
            return lit(rng.choice(["a", "b", "ab"])), bound
        if kind == "empty":
            return EMPTY, bound
        if kind == "concat":
            p1, bound = gen_pattern(depth - 1, bound)
            p2, bound = gen_pattern(depth - 1, bound)
            return Concatenation(p1, p2), bound
        v = f"v{next(counter)}"
        return NamedPattern(v, gen_reducible(depth - 1)), bound | {v}

    def gen_reducible(depth: int):
        kinds = ["value", "value"]
        if depth > 0:
            kinds += ["alt", "ref"]
        kind = rng.choice(kinds)
        if kind == "value":
            p, bound = gen_pattern(depth, frozenset())
            return PatternValue(p, gen_expression(bound, 1))
        if kind == "alt":
            return Alternative(gen_reducible(depth - 1), gen_reducible(depth - 1))
        return NonTerminal(rng.choice(names), ())

    rules = []
    for name in names:
        for _ in range(rng.randint(1, 2)):
            rules.append(rule(name, gen_reducible(2)))
    return grammar("rnd", rules, names[0])


def random_text(rng: random.Random, alphabet: str = "ab", max_len: int = 6) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))

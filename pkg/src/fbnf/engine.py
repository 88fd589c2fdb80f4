"""Backtracking interpreter for functional-BNF grammars.

Derivation is scannerless, character-level top-down search.  Every operation
enumerates *all* of its derivations as a lazy generator of results, in a
deterministic order; backtracking is nothing more than the caller moving on
to the next element.  Bindings survive backtracking because environments are
persistent: extending one returns a new value and never touches the original.

Runaway derivations (typically left recursion) are cut off by a step budget
and a rule-recursion depth cap; :func:`parse_full` reports either as a
syntax failure with ``budget_exceeded`` set.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterator, Mapping

from .grammar import (
    Alternative, ArgRef, BinaryOp, Builtin, Call, Concatenation, Empty,
    Expression, Grammar, NamedPattern, NonTerminal, NumberLiteral, Pattern,
    PatternValue, Reducible, Rule, Terminal, VarRef, default_builtins,
)

__all__ = [
    "Env", "Value", "SyntaxFailure", "ParseOutcome", "StepMeter",
    "BudgetExhausted", "UnboundNameError",
    "derive_pattern", "derive_reducible", "evaluate_expression", "parse_full",
    "DEFAULT_STEP_BUDGET", "DEFAULT_MAX_DEPTH",
]

DEFAULT_STEP_BUDGET = 1_000_000
DEFAULT_MAX_DEPTH = 2_000

# Deep rule recursion nests several generator frames per rule invocation;
# give CPython enough stack for DEFAULT_MAX_DEPTH before the cap trips.
_MIN_RECURSION_LIMIT = 50_000


class BudgetExhausted(Exception):
    """A derivation ran out of steps or rule-recursion depth."""


class UnboundNameError(Exception):
    """Engine defect: evaluation hit a name validation should have rejected."""


class StepMeter:
    """Counts derivation steps and enforces a budget.

    Pass one meter to several runs to meter them jointly, or read ``steps``
    afterwards to observe how much of the search a run actually touched.
    """

    __slots__ = ("budget", "steps")

    def __init__(self, budget: int = DEFAULT_STEP_BUDGET):
        self.budget = budget
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExhausted(f"step budget of {self.budget} exhausted")


class Env:
    """Persistent variable/argument bindings.

    ``vars`` holds NamedPattern bindings, ``args`` the enclosing rule's
    argument values.  Both namespaces are independent.  Extension copies;
    existing environments are never mutated, which is what makes bindings
    obey backtracking.
    """

    __slots__ = ("_vars", "_args")

    def __init__(self, vars: Mapping[str, float] | None = None,
                 args: Mapping[str, float] | None = None):
        self._vars = dict(vars) if vars else {}
        self._args = dict(args) if args else {}

    def bind_var(self, name: str, value: float) -> "Env":
        new = Env.__new__(Env)
        new._vars = {**self._vars, name: value}
        new._args = self._args
        return new

    def var(self, name: str) -> float:
        try:
            return self._vars[name]
        except KeyError:
            raise UnboundNameError(f"variable {name!r} is not bound") from None

    def arg(self, name: str) -> float:
        try:
            return self._args[name]
        except KeyError:
            raise UnboundNameError(f"argument {name!r} is not bound") from None

    @property
    def vars(self) -> dict[str, float]:
        return dict(self._vars)

    @property
    def args(self) -> dict[str, float]:
        return dict(self._args)

    def __eq__(self, other):
        return isinstance(other, Env) and self._vars == other._vars and self._args == other._args

    def __hash__(self):
        return hash((frozenset(self._vars.items()), frozenset(self._args.items())))

    def __repr__(self):
        return f"Env(vars={self._vars!r}, args={self._args!r})"


@dataclass(frozen=True)
class Value:
    result: float


@dataclass(frozen=True)
class SyntaxFailure:
    """No derivation consumed the whole input.  ``budget_exceeded``
    distinguishes a tripped non-termination guard from a plain mismatch."""
    budget_exceeded: bool = False


ParseOutcome = Value | SyntaxFailure


def _ieee_div(a: float, b: float) -> float:
    # Python raises on division by zero; IEEE wants signed infinity / NaN.
    if b != 0.0:
        return a / b
    if a == 0.0 or math.isnan(a):
        return math.nan
    return math.copysign(math.inf, a) * math.copysign(1.0, b)


def evaluate_expression(e: Expression, env: Env,
                        builtins: Mapping[str, Builtin] | None = None) -> float:
    """Evaluate an expression to a double under the given bindings.

    Arithmetic follows IEEE semantics: division by zero yields an infinity
    or NaN rather than an error, and NaN propagates.  An unbound name raises
    :class:`UnboundNameError`, which validation precludes for checked
    grammars.
    """
    if builtins is None:
        builtins = default_builtins()
    match e:
        case NumberLiteral(value=v):
            return float(v)
        case VarRef(name=n):
            return env.var(n)
        case ArgRef(name=n):
            return env.arg(n)
        case BinaryOp(op=op, left=l, right=r):
            a = evaluate_expression(l, env, builtins)
            b = evaluate_expression(r, env, builtins)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            return _ieee_div(a, b)
        case Call(function=f, args=args):
            try:
                fn = builtins[f].fn
            except KeyError:
                raise UnboundNameError(f"builtin {f!r} is not registered") from None
            return float(fn(*(evaluate_expression(a, env, builtins) for a in args)))
    raise TypeError(f"not an expression: {e!r}")


class _Run:
    """Shared state of one derivation search."""

    __slots__ = ("grammar", "text", "builtins", "meter", "max_depth",
                 "strict_depth", "_index")

    def __init__(self, grammar: Grammar, text: str,
                 builtins: Mapping[str, Builtin] | None,
                 meter: StepMeter | None, step_budget: int | None,
                 max_depth: int | None, strict_depth: bool):
        self.grammar = grammar
        self.text = text
        self.builtins = default_builtins() if builtins is None else builtins
        if meter is None:
            meter = StepMeter(DEFAULT_STEP_BUDGET if step_budget is None else step_budget)
        self.meter = meter
        self.max_depth = max_depth
        self.strict_depth = strict_depth
        self._index: dict[tuple[str, int], list[Rule]] = {}
        for r in grammar.rules:
            self._index.setdefault((r.name, r.arity), []).append(r)
        if sys.getrecursionlimit() < _MIN_RECURSION_LIMIT:
            sys.setrecursionlimit(_MIN_RECURSION_LIMIT)

    def rules(self, name: str, arity: int) -> list[Rule]:
        return self._index.get((name, arity), [])


def _derive_pattern(run: _Run, p: Pattern, pos: int, env: Env,
                    depth: int) -> Iterator[tuple[Env, int]]:
    run.meter.tick()
    match p:
        case Terminal(text=t):
            if run.text.startswith(t, pos):
                yield env, pos + len(t)
        case Empty():
            yield env, pos
        case Concatenation(first=f, second=s):
            for env1, mid in _derive_pattern(run, f, pos, env, depth):
                yield from _derive_pattern(run, s, mid, env1, depth)
        case NamedPattern(variable=v, inner=inner):
            for value, end in _derive_reducible(run, inner, pos, env, depth):
                yield env.bind_var(v, value), end
        case _:
            raise TypeError(f"not a pattern: {p!r}")


def _derive_reducible(run: _Run, r: Reducible, pos: int, env: Env,
                      depth: int) -> Iterator[tuple[float, int]]:
    run.meter.tick()
    match r:
        case PatternValue(pattern=p, result=e):
            for env1, end in _derive_pattern(run, p, pos, env, depth):
                yield evaluate_expression(e, env1, run.builtins), end
        case Alternative(left=l, right=rt):
            yield from _derive_reducible(run, l, pos, env, depth)
            yield from _derive_reducible(run, rt, pos, env, depth)
        case NonTerminal(rule=name, args=arg_exprs):
            if run.max_depth is not None and depth >= run.max_depth:
                if run.strict_depth:
                    raise BudgetExhausted(f"rule recursion deeper than {run.max_depth}")
                return
            values = [evaluate_expression(a, env, run.builtins) for a in arg_exprs]
            for rule in run.rules(name, len(values)):
                callee = Env(args=dict(zip(rule.params, values)))
                yield from _derive_reducible(run, rule.body, pos, callee, depth + 1)
        case _:
            raise TypeError(f"not a reducible: {r!r}")


def derive_pattern(grammar: Grammar, p: Pattern, text: str, pos: int = 0,
                   env: Env | None = None, *,
                   builtins: Mapping[str, Builtin] | None = None,
                   meter: StepMeter | None = None,
                   step_budget: int | None = None,
                   max_depth: int | None = None) -> Iterator[tuple[Env, int]]:
    """Enumerate every way ``p`` derives a prefix of ``text`` starting at ``pos``.

    Yields ``(extended_env, residue_position)`` pairs in deterministic order:
    a terminal matches its literal text exactly (no case folding, no
    whitespace skipping), ``Empty`` succeeds once consuming nothing,
    concatenation replays each first-component result against every
    second-component continuation, and a named pattern extends the
    environment with its variable.  Exhaustion of the iterator is ordinary
    failure; ``max_depth``, when given, silently prunes deeper rule
    recursion so that enumeration over left-recursive grammars terminates.
    """
    run = _Run(grammar, text, builtins, meter, step_budget, max_depth, strict_depth=False)
    return _derive_pattern(run, p, pos, Env() if env is None else env, 0)


def derive_reducible(grammar: Grammar, r: Reducible, text: str, pos: int = 0,
                     env: Env | None = None, *,
                     builtins: Mapping[str, Builtin] | None = None,
                     meter: StepMeter | None = None,
                     step_budget: int | None = None,
                     max_depth: int | None = None) -> Iterator[tuple[float, int]]:
    """Enumerate every ``(value, residue_position)`` derivation of ``r``.

    A pattern-value maps each pattern derivation to its evaluated result;
    an alternative enumerates all left results then all right results; a
    nonterminal evaluates its argument expressions in the caller's
    environment and tries each same-name, same-arity rule in grammar order,
    giving the callee a fresh environment (caller bindings are invisible,
    arguments scope to the rule).
    """
    run = _Run(grammar, text, builtins, meter, step_budget, max_depth, strict_depth=False)
    return _derive_reducible(run, r, pos, Env() if env is None else env, 0)


def parse_full(grammar: Grammar, text: str, *,
               builtins: Mapping[str, Builtin] | None = None,
               meter: StepMeter | None = None,
               step_budget: int | None = None,
               max_depth: int | None = DEFAULT_MAX_DEPTH) -> ParseOutcome:
    """Parse and evaluate ``text`` against the grammar's start symbol.

    Returns ``Value`` for the first enumerated derivation that consumes the
    whole input (rule order makes this deterministic), otherwise
    ``SyntaxFailure``.  The step budget and recursion-depth cap convert a
    diverging search into ``SyntaxFailure(budget_exceeded=True)``.
    """
    run = _Run(grammar, text, builtins, meter, step_budget, max_depth, strict_depth=True)
    goal = NonTerminal(grammar.start, ())
    try:
        for value, end in _derive_reducible(run, goal, 0, Env(), 0):
            if end == len(text):
                return Value(value)
    except (BudgetExhausted, RecursionError):
        return SyntaxFailure(budget_exceeded=True)
    return SyntaxFailure()

"""Grammar data model for functional BNF.

A functional-BNF grammar is an ordered collection of production rules whose
bodies both match text and compute a numeric value.  The model splits into
three layers:

* ``Expression`` -- numeric expression trees over literals, bound variables,
  rule arguments, the four arithmetic operators, and named builtin functions.
* ``Pattern`` -- string-matching constructs that produce variable bindings
  (``Terminal``, ``Empty``, ``Concatenation``, ``NamedPattern``).
* ``Reducible`` -- string-matching constructs that produce a single value
  (``PatternValue``, ``NonTerminal``, ``Alternative``).

All values are IEEE doubles, so static checking reduces to name resolution
and arity checking; :func:`validate_grammar` performs it and reports
:class:`Diagnostic` entries instead of raising.  :func:`detect_left_recursion`
flags rules whose derivation can re-enter themselves before consuming input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

__all__ = [
    "Expression", "NumberLiteral", "VarRef", "ArgRef", "BinaryOp", "Call",
    "Pattern", "Terminal", "Empty", "Concatenation", "NamedPattern",
    "Reducible", "PatternValue", "NonTerminal", "Alternative",
    "Rule", "Grammar", "Diagnostic", "Builtin",
    "num", "var", "arg", "call", "lit", "seq", "bind", "alt", "nt", "pv",
    "rule", "grammar", "EMPTY",
    "default_builtins", "validate_grammar", "detect_left_recursion",
    "left_recursion_diagnostics", "pattern_bindings",
    "BINARY_OPS", "DIAGNOSTIC_CODES", "ERROR", "WARNING",
]

BINARY_OPS = ("+", "-", "*", "/")


# ---------------------------------------------------------------------------
# Expressions

class Expression:
    """Base of all numeric expressions.  Arithmetic operators build trees."""

    def __add__(self, other):
        return BinaryOp("+", self, as_expression(other))

    def __radd__(self, other):
        return BinaryOp("+", as_expression(other), self)

    def __sub__(self, other):
        return BinaryOp("-", self, as_expression(other))

    def __rsub__(self, other):
        return BinaryOp("-", as_expression(other), self)

    def __mul__(self, other):
        return BinaryOp("*", self, as_expression(other))

    def __rmul__(self, other):
        return BinaryOp("*", as_expression(other), self)

    def __truediv__(self, other):
        return BinaryOp("/", self, as_expression(other))

    def __rtruediv__(self, other):
        return BinaryOp("/", as_expression(other), self)


def as_expression(x) -> Expression:
    """Coerce a plain number to a literal; pass expressions through."""
    if isinstance(x, Expression):
        return x
    if isinstance(x, (int, float)):
        return NumberLiteral(float(x))
    raise TypeError(f"cannot use {x!r} as an expression")


@dataclass(frozen=True)
class NumberLiteral(Expression):
    value: float


@dataclass(frozen=True)
class VarRef(Expression):
    """Reference to a variable bound by a NamedPattern."""
    name: str


@dataclass(frozen=True)
class ArgRef(Expression):
    """Reference to a formal argument of the enclosing rule."""
    name: str


@dataclass(frozen=True)
class BinaryOp(Expression):
    op: str
    left: Expression
    right: Expression

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unsupported operator {self.op!r}")


@dataclass(frozen=True)
class Call(Expression):
    """Application of a named builtin function."""
    function: str
    args: tuple[Expression, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


# ---------------------------------------------------------------------------
# Patterns: match a prefix of the input and produce variable bindings

class Pattern:
    pass


@dataclass(frozen=True)
class Terminal(Pattern):
    """Matches a constant, non-empty string, case-sensitively."""
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("terminal text must be non-empty")


@dataclass(frozen=True)
class Empty(Pattern):
    """Matches the empty string."""


@dataclass(frozen=True)
class Concatenation(Pattern):
    first: Pattern
    second: Pattern


@dataclass(frozen=True)
class NamedPattern(Pattern):
    """Binds the value produced by ``inner`` to ``variable``."""
    variable: str
    inner: "Reducible"


# ---------------------------------------------------------------------------
# Reducibles: match a prefix of the input and produce a single value

class Reducible:
    pass


@dataclass(frozen=True)
class PatternValue(Reducible):
    """Evaluates ``result`` under the bindings produced by ``pattern``."""
    pattern: Pattern
    result: Expression


@dataclass(frozen=True)
class NonTerminal(Reducible):
    """Reference to the rule(s) named ``rule``, passing argument values."""
    rule: str
    args: tuple[Expression, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Alternative(Reducible):
    """Ordered choice: all of ``left``'s derivations, then all of ``right``'s."""
    left: Reducible
    right: Reducible


# ---------------------------------------------------------------------------
# Rules and grammars

@dataclass(frozen=True)
class Rule:
    name: str
    params: tuple[str, ...]
    body: Reducible
    feature: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class Grammar:
    """Named, ordered rule collection.  Earlier rules are tried first;
    rules sharing a name and arity act as ordered alternatives."""
    name: str
    rules: tuple[Rule, ...]
    start: str

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def rules_named(self, name: str, arity: int) -> list[Rule]:
        return [r for r in self.rules if r.name == name and r.arity == arity]


# ---------------------------------------------------------------------------
# Builder helpers (the embedded-DSL surface)

EMPTY = Empty()


def num(x) -> NumberLiteral:
    return NumberLiteral(float(x))


def var(name: str) -> VarRef:
    return VarRef(name)


def arg(name: str) -> ArgRef:
    return ArgRef(name)


def call(function: str, *args) -> Call:
    return Call(function, tuple(as_expression(a) for a in args))


def lit(text: str) -> Terminal:
    return Terminal(text)


def as_pattern(x) -> Pattern:
    if isinstance(x, Pattern):
        return x
    if isinstance(x, str):
        return Terminal(x)
    raise TypeError(f"cannot use {x!r} as a pattern")


def seq(*parts) -> Pattern:
    """Right-nested concatenation; strings become terminals."""
    if not parts:
        return EMPTY
    pats = [as_pattern(p) for p in parts]
    out = pats[-1]
    for p in reversed(pats[:-1]):
        out = Concatenation(p, out)
    return out


def bind(variable: str, inner: Reducible) -> NamedPattern:
    return NamedPattern(variable, inner)


def alt(*reducibles: Reducible) -> Reducible:
    """Right-nested ordered choice."""
    if not reducibles:
        raise ValueError("alt() needs at least one reducible")
    out = reducibles[-1]
    for r in reversed(reducibles[:-1]):
        out = Alternative(r, out)
    return out


def nt(name: str, *args) -> NonTerminal:
    return NonTerminal(name, tuple(as_expression(a) for a in args))


def pv(pattern, result) -> PatternValue:
    return PatternValue(as_pattern(pattern), as_expression(result))


def rule(name: str, body: Reducible, params: Iterable[str] = (), feature: str | None = None) -> Rule:
    return Rule(name, tuple(params), body, feature)


def grammar(name: str, rules: Iterable[Rule], start: str) -> Grammar:
    return Grammar(name, tuple(rules), start)


# ---------------------------------------------------------------------------
# Builtin functions

@dataclass(frozen=True)
class Builtin:
    arity: int
    fn: Callable[..., float]


def _total(fn: Callable[[float], float]) -> Callable[[float], float]:
    # math.* raises on infinite arguments; IEEE wants NaN instead.
    def wrapped(x: float) -> float:
        try:
            return fn(x)
        except ValueError:
            return math.nan
    return wrapped


def default_builtins() -> dict[str, Builtin]:
    """Unary trigonometric builtins (radians), NaN on invalid arguments."""
    return {
        "sin": Builtin(1, _total(math.sin)),
        "cos": Builtin(1, _total(math.cos)),
        "tan": Builtin(1, _total(math.tan)),
    }


# ---------------------------------------------------------------------------
# Diagnostics and static validation

ERROR = "error"
WARNING = "warning"

DIAGNOSTIC_CODES = frozenset({
    "UNDEFINED_NONTERMINAL", "ARITY_MISMATCH", "UNBOUND_VARIABLE",
    "UNKNOWN_BUILTIN", "LEFT_RECURSION", "NO_START_RULE",
    "DUPLICATE_PARAM", "VARIABLE_SHADOWING",
})


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    rule: str | None
    message: str
    code: str


def pattern_bindings(p: Pattern) -> frozenset[str]:
    """Names a pattern is guaranteed to bind.

    Patterns bind deterministically: concatenation is the union of both
    sides and a named pattern introduces exactly its variable, so the
    guaranteed set equals the introduced set.
    """
    match p:
        case Terminal() | Empty():
            return frozenset()
        case Concatenation(first=f, second=s):
            return pattern_bindings(f) | pattern_bindings(s)
        case NamedPattern(variable=v):
            return frozenset({v})
    raise TypeError(f"not a pattern: {p!r}")


class _Validator:
    def __init__(self, g: Grammar, builtins: Mapping[str, Builtin]):
        self.g = g
        self.builtins = builtins
        self.out: list[Diagnostic] = []
        self.arities: dict[str, set[int]] = {}
        for r in g.rules:
            self.arities.setdefault(r.name, set()).add(r.arity)

    def error(self, rule: str | None, message: str, code: str):
        self.out.append(Diagnostic(ERROR, rule, message, code))

    def run(self) -> list[Diagnostic]:
        start = [r for r in self.g.rules if r.name == self.g.start]
        if not start:
            self.error(None, f"start symbol {self.g.start!r} names no rule", "NO_START_RULE")
        elif all(r.params for r in start):
            self.error(None, f"start symbol {self.g.start!r} has no rule of arity 0", "NO_START_RULE")
        for r in self.g.rules:
            seen: set[str] = set()
            reported: set[str] = set()
            for p in r.params:
                if p in seen and p not in reported:
                    self.error(r.name, f"duplicate parameter {p!r}", "DUPLICATE_PARAM")
                    reported.add(p)
                seen.add(p)
            self.reducible(r.body, frozenset(), r)
        return self.out

    def reducible(self, red: Reducible, active: frozenset[str], r: Rule):
        match red:
            case PatternValue(pattern=p, result=e):
                self.pattern(p, active, r)
                # The result expression sees only its own pattern's bindings
                # (plus rule arguments), not enclosing patterns'.
                self.expression(e, pattern_bindings(p), r)
            case Alternative(left=l, right=rt):
                self.reducible(l, active, r)
                self.reducible(rt, active, r)
            case NonTerminal(rule=name, args=args):
                if name not in self.arities:
                    self.error(r.name, f"reference to undefined rule {name!r}", "UNDEFINED_NONTERMINAL")
                elif len(args) not in self.arities[name]:
                    self.error(
                        r.name,
                        f"rule {name!r} has no definition of arity {len(args)}",
                        "ARITY_MISMATCH",
                    )
                for a in args:
                    self.expression(a, active, r)
            case _:
                raise TypeError(f"not a reducible: {red!r}")

    def pattern(self, pat: Pattern, active: frozenset[str], r: Rule) -> frozenset[str]:
        match pat:
            case Terminal() | Empty():
                return active
            case Concatenation(first=f, second=s):
                mid = self.pattern(f, active, r)
                return self.pattern(s, mid, r)
            case NamedPattern(variable=v, inner=inner):
                if v in active:
                    self.error(r.name, f"variable {v!r} shadows an earlier binding", "VARIABLE_SHADOWING")
                self.reducible(inner, active, r)
                return active | {v}
        raise TypeError(f"not a pattern: {pat!r}")

    def expression(self, e: Expression, allowed_vars: frozenset[str], r: Rule):
        match e:
            case NumberLiteral():
                pass
            case VarRef(name=n):
                if n not in allowed_vars:
                    self.error(r.name, f"variable {n!r} is not bound here", "UNBOUND_VARIABLE")
            case ArgRef(name=n):
                if n not in r.params:
                    self.error(r.name, f"argument {n!r} is not a parameter of {r.name!r}", "UNBOUND_VARIABLE")
            case BinaryOp(left=l, right=rt):
                self.expression(l, allowed_vars, r)
                self.expression(rt, allowed_vars, r)
            case Call(function=f, args=args):
                if f not in self.builtins:
                    self.error(r.name, f"unknown builtin {f!r}", "UNKNOWN_BUILTIN")
                elif self.builtins[f].arity != len(args):
                    self.error(
                        r.name,
                        f"builtin {f!r} takes {self.builtins[f].arity} argument(s), got {len(args)}",
                        "ARITY_MISMATCH",
                    )
                for a in args:
                    self.expression(a, allowed_vars, r)
            case _:
                raise TypeError(f"not an expression: {e!r}")


def validate_grammar(g: Grammar, builtins: Mapping[str, Builtin] | None = None) -> list[Diagnostic]:
    """Statically check name resolution, arities, and variable scoping.

    Returns an empty list iff the grammar is well-formed; each violation
    yields exactly one diagnostic, in a deterministic traversal order
    (grammar-level checks first, then rules in declaration order).
    Left recursion is not an error here; see :func:`detect_left_recursion`.
    """
    if builtins is None:
        builtins = default_builtins()
    return _Validator(g, builtins).run()


# ---------------------------------------------------------------------------
# Left-recursion analysis

def _nullable_table(g: Grammar) -> dict[tuple[str, int], bool]:
    """Fixpoint: can each (name, arity) rule group derive the empty string?"""
    table = {(r.name, r.arity): False for r in g.rules}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            key = (r.name, r.arity)
            if not table[key] and _nullable_reducible(r.body, table):
                table[key] = True
                changed = True
    return table


def _nullable_reducible(red: Reducible, table) -> bool:
    match red:
        case PatternValue(pattern=p):
            return _nullable_pattern(p, table)
        case Alternative(left=l, right=rt):
            return _nullable_reducible(l, table) or _nullable_reducible(rt, table)
        case NonTerminal(rule=name, args=args):
            return table.get((name, len(args)), False)
    raise TypeError(f"not a reducible: {red!r}")


def _nullable_pattern(pat: Pattern, table) -> bool:
    match pat:
        case Terminal():
            return False
        case Empty():
            return True
        case Concatenation(first=f, second=s):
            return _nullable_pattern(f, table) and _nullable_pattern(s, table)
        case NamedPattern(inner=inner):
            return _nullable_reducible(inner, table)
    raise TypeError(f"not a pattern: {pat!r}")


def _leftmost_refs_reducible(red: Reducible, table) -> set[str]:
    match red:
        case PatternValue(pattern=p):
            return _leftmost_refs_pattern(p, table)
        case Alternative(left=l, right=rt):
            return _leftmost_refs_reducible(l, table) | _leftmost_refs_reducible(rt, table)
        case NonTerminal(rule=name):
            return {name}
    raise TypeError(f"not a reducible: {red!r}")


def _leftmost_refs_pattern(pat: Pattern, table) -> set[str]:
    match pat:
        case Terminal() | Empty():
            return set()
        case Concatenation(first=f, second=s):
            refs = _leftmost_refs_pattern(f, table)
            if _nullable_pattern(f, table):
                refs = refs | _leftmost_refs_pattern(s, table)
            return refs
        case NamedPattern(inner=inner):
            return _leftmost_refs_reducible(inner, table)
    raise TypeError(f"not a pattern: {pat!r}")


def leftmost_reference_graph(g: Grammar) -> dict[str, set[str]]:
    """Edges R -> S where some rule named R can reach a reference to S
    before consuming any character (through empty matches and nullable
    prefixes)."""
    table = _nullable_table(g)
    edges: dict[str, set[str]] = {}
    for r in g.rules:
        edges.setdefault(r.name, set()).update(_leftmost_refs_reducible(r.body, table))
    return edges


def detect_left_recursion(g: Grammar) -> set[str]:
    """Rule names lying on a cycle of the leftmost-reference relation.

    These rules would make naive top-down derivation diverge; detection is
    advisory (the engine's step budget is the hard guard).
    """
    edges = leftmost_reference_graph(g)

    def reachable(origin: str) -> set[str]:
        seen: set[str] = set()
        stack = list(edges.get(origin, ()))
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(edges.get(n, ()))
        return seen

    return {name for name in edges if name in reachable(name)}


def left_recursion_diagnostics(g: Grammar) -> list[Diagnostic]:
    """Advisory warnings for rules flagged by :func:`detect_left_recursion`."""
    return [
        Diagnostic(WARNING, name, f"rule {name!r} is left-recursive", "LEFT_RECURSION")
        for name in sorted(detect_left_recursion(g))
    ]

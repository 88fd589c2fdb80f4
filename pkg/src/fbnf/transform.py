"""Left-recursion elimination via argument-threading suffix rules.

A directly left-recursive rule group

    R ::= (a=R, T1){e1}        # any number of recursive bodies
    R ::= B1                   # at least one non-recursive body

is rewritten into an accumulator form that a top-down engine can run:

    R        ::= (a=B1, s=RSuffix(a)){s}
    RSuffix(acc) ::= (T1[a -> acc], s=RSuffix(e1[a -> acc])){s}
    RSuffix(acc) ::= (<empty>){acc}

Threading the value computed so far through the suffix argument preserves
left-associative evaluation: "8-3-2" still folds as (8-3)-2.  The simpler
rewrite that re-derives R on the right of the operator would right-associate
and change values for '-' and '/'.

Only direct left recursion in exactly this head-position shape is handled;
anything else aborts with a :class:`TransformError` naming the rules.
"""

from __future__ import annotations

from dataclasses import replace

from .grammar import (
    Alternative, ArgRef, BinaryOp, Call, Concatenation, Empty, Expression,
    Grammar, NamedPattern, NonTerminal, NumberLiteral, Pattern, PatternValue,
    Reducible, Rule, Terminal, VarRef, detect_left_recursion,
    leftmost_reference_graph, pattern_bindings, _nullable_pattern,
    _nullable_table, seq,
)

__all__ = ["eliminate_left_recursion", "TransformError",
           "INDIRECT_LEFT_RECURSION", "UNSUPPORTED_SHAPE"]

INDIRECT_LEFT_RECURSION = "INDIRECT_LEFT_RECURSION"
UNSUPPORTED_SHAPE = "UNSUPPORTED_SHAPE"

_ACC = "acc"


class TransformError(Exception):
    def __init__(self, code: str, rules: list[str], message: str):
        super().__init__(message)
        self.code = code
        self.rules = rules


def _flatten(p: Pattern) -> list[Pattern]:
    if isinstance(p, Concatenation):
        return _flatten(p.first) + _flatten(p.second)
    return [p]


def _subst_expression(e: Expression, name: str, replacement: Expression) -> Expression:
    match e:
        case VarRef(name=n) if n == name:
            return replacement
        case NumberLiteral() | VarRef() | ArgRef():
            return e
        case BinaryOp(op=op, left=l, right=r):
            return BinaryOp(op, _subst_expression(l, name, replacement),
                            _subst_expression(r, name, replacement))
        case Call(function=f, args=args):
            return Call(f, tuple(_subst_expression(a, name, replacement) for a in args))
    raise TypeError(f"not an expression: {e!r}")


def _subst_pattern(p: Pattern, name: str, replacement: Expression) -> Pattern:
    # Validation rules out any rebinding of `name` inside the tail, so a
    # blanket substitution cannot capture.
    match p:
        case Terminal() | Empty():
            return p
        case Concatenation(first=f, second=s):
            return Concatenation(_subst_pattern(f, name, replacement),
                                 _subst_pattern(s, name, replacement))
        case NamedPattern(variable=v, inner=inner):
            return NamedPattern(v, _subst_reducible(inner, name, replacement))
    raise TypeError(f"not a pattern: {p!r}")


def _subst_reducible(r: Reducible, name: str, replacement: Expression) -> Reducible:
    match r:
        case PatternValue(pattern=p, result=e):
            return PatternValue(_subst_pattern(p, name, replacement),
                                _subst_expression(e, name, replacement))
        case Alternative(left=l, right=rt):
            return Alternative(_subst_reducible(l, name, replacement),
                               _subst_reducible(rt, name, replacement))
        case NonTerminal(rule=n, args=args):
            return NonTerminal(n, tuple(_subst_expression(a, name, replacement) for a in args))
    raise TypeError(f"not a reducible: {r!r}")


def _head_split(rule: Rule) -> tuple[str, list[Pattern], Expression] | None:
    """Decompose ``(a=R, tail...){e}`` bodies; None when not self-recursive."""
    body = rule.body
    if not isinstance(body, PatternValue):
        return None
    atoms = _flatten(body.pattern)
    head = atoms[0]
    if not (isinstance(head, NamedPattern)
            and isinstance(head.inner, NonTerminal)
            and head.inner.rule == rule.name):
        return None
    if head.inner.args:
        raise TransformError(UNSUPPORTED_SHAPE, [rule.name],
                             f"rule {rule.name!r} recurses on itself with arguments")
    return head.variable, atoms[1:], body.result


def _fresh_suffix_name(base: str, taken: set[str]) -> str:
    name = f"{base}Suffix"
    k = 2
    while name in taken:
        name = f"{base}Suffix{k}"
        k += 1
    return name


def _fresh_var(preferred: str, taken: frozenset[str]) -> str:
    name = preferred
    k = 2
    while name in taken:
        name = f"{preferred}{k}"
        k += 1
    return name


def eliminate_left_recursion(g: Grammar) -> Grammar:
    """Rewrite direct left recursion into suffix rules; identity otherwise.

    A grammar with no left-recursive rules is returned unchanged, which
    also makes the transform idempotent.  Indirect cycles and recursive
    bodies outside the supported head-position shape raise
    :class:`TransformError` rather than being half-rewritten.
    """
    recursive_names = detect_left_recursion(g)
    if not recursive_names:
        return g

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

    indirect = sorted(
        n for n in recursive_names
        if any(m != n and n in reachable(m) for m in reachable(n))
    )
    if indirect:
        raise TransformError(
            INDIRECT_LEFT_RECURSION, indirect,
            f"left-recursive cycle spans multiple rules: {', '.join(indirect)}",
        )

    nullable = _nullable_table(g)
    taken_names = {r.name for r in g.rules}
    suffix_names: dict[str, str] = {}
    recursive_rules: dict[str, list[tuple[str, list[Pattern], Expression, Rule]]] = {}
    base_rules: dict[str, list[Rule]] = {}

    for name in sorted(recursive_names):
        group = [r for r in g.rules if r.name == name]
        if any(r.params for r in group):
            raise TransformError(UNSUPPORTED_SHAPE, [name],
                                 f"left-recursive rule {name!r} takes arguments")
        for r in group:
            split = _head_split(r)
            if split is None:
                if name in _leftmost_of_rule(r, nullable):
                    raise TransformError(
                        UNSUPPORTED_SHAPE, [name],
                        f"rule {name!r} is left-recursive outside the (a={name}, ...){{e}} shape",
                    )
                base_rules.setdefault(name, []).append(r)
            else:
                head_var, tail_atoms, result = split
                tail = seq(*tail_atoms)
                if _nullable_pattern(tail, nullable):
                    raise TransformError(
                        UNSUPPORTED_SHAPE, [name],
                        f"rule {name!r} recurses on itself with a nullable tail",
                    )
                recursive_rules.setdefault(name, []).append((head_var, tail_atoms, result, r))
        if name not in base_rules:
            raise TransformError(UNSUPPORTED_SHAPE, [name],
                                 f"rule {name!r} has no non-recursive alternative")
        suffix_names[name] = _fresh_suffix_name(name, taken_names)
        taken_names.add(suffix_names[name])

    out: list[Rule] = []
    for r in g.rules:
        if r.name not in recursive_names:
            out.append(r)
            continue
        if r in base_rules.get(r.name, ()):
            # R ::= (a=B, s=RSuffix(a)){s}
            suffix = suffix_names[r.name]
            pattern = seq(
                NamedPattern("a", r.body),
                NamedPattern("s", NonTerminal(suffix, (VarRef("a"),))),
            )
            out.append(replace(r, body=PatternValue(pattern, VarRef("s"))))

    for name in sorted(recursive_names):
        suffix = suffix_names[name]
        for head_var, tail_atoms, result, source in recursive_rules[name]:
            acc = ArgRef(_ACC)
            new_tail = [_subst_pattern(a, head_var, acc) for a in tail_atoms]
            new_result = _subst_expression(result, head_var, acc)
            bound = frozenset().union(*(pattern_bindings(a) for a in new_tail))
            s_var = _fresh_var("s", bound)
            pattern = seq(*new_tail, NamedPattern(s_var, NonTerminal(suffix, (new_result,))))
            out.append(Rule(suffix, (_ACC,), PatternValue(pattern, VarRef(s_var)),
                            source.feature))
        out.append(Rule(suffix, (_ACC,), PatternValue(Empty(), ArgRef(_ACC))))

    return replace(g, rules=tuple(out))


def _leftmost_of_rule(r: Rule, nullable) -> set[str]:
    from .grammar import _leftmost_refs_reducible
    return _leftmost_refs_reducible(r.body, nullable)

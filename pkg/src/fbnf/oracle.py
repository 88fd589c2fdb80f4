"""Brute-force language enumeration, used to cross-check the engine.

The oracle deliberately avoids the lazy, first-match shortcut that
:func:`fbnf.engine.parse_full` takes: for each candidate string it collects
*every* derivation eagerly and only then looks for full-input matches, so
the two code paths can disagree if either is wrong.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from .engine import Env, StepMeter, _Run, _derive_reducible
from .grammar import Builtin, Grammar, NonTerminal

__all__ = ["all_derivations", "accepted_strings_oracle"]


def all_derivations(grammar: Grammar, text: str, *,
                    builtins: Mapping[str, Builtin] | None = None,
                    meter: StepMeter | None = None,
                    step_budget: int | None = None,
                    max_depth: int | None = None) -> list[tuple[float, int]]:
    """Every (value, residue position) derivation of the start symbol, eagerly.

    ``max_depth`` bounds rule recursion by pruning (no error), which makes
    enumeration over left-recursive grammars finite.
    """
    run = _Run(grammar, text, builtins, meter, step_budget, max_depth, strict_depth=False)
    goal = NonTerminal(grammar.start, ())
    return list(_derive_reducible(run, goal, 0, Env(), 0))


def _strings(alphabet: Iterable[str], max_len: int):
    symbols = sorted(alphabet)
    for n in range(max_len + 1):
        for chars in itertools.product(symbols, repeat=n):
            yield "".join(chars)


def accepted_strings_oracle(grammar: Grammar, alphabet: Iterable[str], max_len: int, *,
                            builtins: Mapping[str, Builtin] | None = None,
                            step_budget: int | None = None,
                            max_depth: int | None = None) -> dict[str, float]:
    """Exhaustively enumerate the accepted language up to ``max_len``.

    Returns every string over ``alphabet`` that derives with an empty
    residue, mapped to its value.  Without ``max_depth`` the value is the
    first full match in enumeration order (the same choice the engine
    makes).  With ``max_depth`` -- needed for left-recursive grammars --
    matches are found shortest-derivation-first by iterative deepening, so
    the reported value comes from a minimal-depth derivation.
    """
    out: dict[str, float] = {}
    for s in _strings(alphabet, max_len):
        if max_depth is None:
            results = all_derivations(grammar, s, builtins=builtins, step_budget=step_budget)
            full = [v for v, end in results if end == len(s)]
            if full:
                out[s] = full[0]
        else:
            for depth in range(1, max_depth + 1):
                results = all_derivations(grammar, s, builtins=builtins,
                                          step_budget=step_budget, max_depth=depth)
                full = [v for v, end in results if end == len(s)]
                if full:
                    out[s] = full[0]
                    break
    return out

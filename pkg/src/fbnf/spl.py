"""Feature-based variability: select a product's rules out of a shared pool.

Rules optionally carry a feature annotation; a configuration names the
enabled features and :func:`filter_by_features` keeps exactly the rules
whose annotation is absent or enabled.  Enabling and disabling features
thus controls the insertion and removal of whole grammar rules -- the unit
of variability is the full rule, nothing finer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Mapping

from .grammar import Builtin, Diagnostic, ERROR, Grammar, validate_grammar

__all__ = ["FeatureConfig", "filter_by_features", "load_config",
           "FilterBrokeGrammar", "MalformedConfig"]

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class FeatureConfig:
    product_name: str
    enabled: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "enabled", frozenset(self.enabled))


class FilterBrokeGrammar(Exception):
    """Filtering left dangling references; carries the validation output."""

    code = "FILTER_BROKE_GRAMMAR"

    def __init__(self, config: FeatureConfig, diagnostics: list[Diagnostic]):
        details = "; ".join(d.message for d in diagnostics if d.severity == ERROR)
        super().__init__(
            f"configuration {config.product_name!r} breaks the grammar: {details}")
        self.config = config
        self.diagnostics = diagnostics


class MalformedConfig(Exception):
    code = "MALFORMED_CONFIG"

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def filter_by_features(pool: Grammar, config: FeatureConfig,
                       builtins: Mapping[str, Builtin] | None = None) -> Grammar:
    """Project the rule pool down to one product.

    Keeps, in their original order, exactly the rules whose feature is
    absent or in ``config.enabled``, and re-validates the result; a
    selection that leaves dangling references raises
    :class:`FilterBrokeGrammar` wrapping the diagnostics.
    """
    kept = tuple(r for r in pool.rules
                 if r.feature is None or r.feature in config.enabled)
    product = replace(pool, rules=kept)
    diagnostics = validate_grammar(product, builtins)
    if any(d.severity == ERROR for d in diagnostics):
        raise FilterBrokeGrammar(config, diagnostics)
    return product


def load_config(text: str) -> tuple[FeatureConfig, list[str]]:
    """Parse the line-oriented configuration format.

    The first significant line must be ``product <identifier>``, followed by
    zero or more ``feature <identifier>`` lines; ``#`` starts a comment and
    blank lines are ignored.  Returns the configuration plus any warnings
    (duplicate features collapse, with a warning).  Unknown keys raise
    :class:`MalformedConfig` with the offending line number.
    """
    product: str | None = None
    features: list[str] = []
    warnings: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if key == "product":
            if len(tokens) != 2:
                raise MalformedConfig(lineno, "expected: product <identifier>")
            if product is not None:
                raise MalformedConfig(lineno, "duplicate product line")
            if not _IDENT.match(tokens[1]):
                raise MalformedConfig(lineno, f"invalid product name {tokens[1]!r}")
            product = tokens[1]
        elif key == "feature":
            if product is None:
                raise MalformedConfig(lineno, "feature line before product line")
            if len(tokens) != 2:
                raise MalformedConfig(lineno, "expected: feature <identifier>")
            if not _IDENT.match(tokens[1]):
                raise MalformedConfig(lineno, f"invalid feature name {tokens[1]!r}")
            if tokens[1] in features:
                warnings.append(f"line {lineno}: duplicate feature {tokens[1]!r} ignored")
            else:
                features.append(tokens[1])
        else:
            raise MalformedConfig(lineno, f"unknown key {key!r}")
    if product is None:
        raise MalformedConfig(1, "product line required")
    return FeatureConfig(product, frozenset(features)), warnings

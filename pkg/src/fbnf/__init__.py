"""Functional BNF: grammars whose production rules parse text and compute values.

The package provides the grammar data model and embedded builder API
(:mod:`fbnf.grammar`), a backtracking scannerless interpreter
(:mod:`fbnf.engine`), a brute-force enumeration oracle (:mod:`fbnf.oracle`),
left-recursion elimination (:mod:`fbnf.transform`), feature-based product
assembly (:mod:`fbnf.spl`), and a calculator product line built on top of it
all (:mod:`fbnf.calculators`, :mod:`fbnf.cli`).
"""

from .grammar import (
    Alternative, ArgRef, BinaryOp, Builtin, Call, Concatenation, Diagnostic,
    EMPTY, Empty, Expression, Grammar, NamedPattern, NonTerminal,
    NumberLiteral, Pattern, PatternValue, Reducible, Rule, Terminal, VarRef,
    alt, arg, bind, call, default_builtins, detect_left_recursion, grammar,
    left_recursion_diagnostics, lit, nt, num, pattern_bindings, pv, rule,
    seq, validate_grammar, var,
)
from .engine import (
    DEFAULT_MAX_DEPTH, DEFAULT_STEP_BUDGET, BudgetExhausted, Env,
    ParseOutcome, StepMeter, SyntaxFailure, UnboundNameError, Value,
    derive_pattern, derive_reducible, evaluate_expression, parse_full,
)
from .oracle import accepted_strings_oracle, all_derivations
from .transform import TransformError, eliminate_left_recursion
from .spl import (
    FeatureConfig, FilterBrokeGrammar, MalformedConfig, filter_by_features,
    load_config,
)
from .calculators import PRODUCT_CONFIGS, build_product, calculator_pool

__version__ = "0.1.0"

"""Co-safe LTL front end: parser, DFA compiler, oracle, game product."""

from .dfa import (
    Dfa,
    compile_formula,
    dfa_from_table,
    dfa_to_dot,
    dfa_to_json,
    guard_text,
    language_equivalent,
)
from .formula import Formula, atoms, eventually, parse
from .oracle import semantic_oracle
from .product import entry_state_name, product, product_state_name

__all__ = [
    "Dfa",
    "Formula",
    "atoms",
    "compile_formula",
    "dfa_from_table",
    "dfa_to_dot",
    "dfa_to_json",
    "entry_state_name",
    "eventually",
    "guard_text",
    "language_equivalent",
    "parse",
    "product",
    "product_state_name",
    "semantic_oracle",
]

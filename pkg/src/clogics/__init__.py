"""Cumulative nonmonotonic consequence operations on finite languages."""

from .core import (
    AtomLanguage,
    ConsequenceTable,
    NotACLogic,
    PropertyReport,
    SchemaError,
    TheoryPoset,
    check_c_axioms,
    check_cn_lemmas,
    check_loop,
    cn,
    is_consistent,
    maximal_consistent_sets,
    theories,
    theory_order,
)

__version__ = "0.1.0"

__all__ = [
    "AtomLanguage",
    "ConsequenceTable",
    "NotACLogic",
    "PropertyReport",
    "SchemaError",
    "TheoryPoset",
    "check_c_axioms",
    "check_cn_lemmas",
    "check_loop",
    "cn",
    "is_consistent",
    "maximal_consistent_sets",
    "theories",
    "theory_order",
]

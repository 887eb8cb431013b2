"""Free-by-cyclic groups: strata, corridors, least areas and bracketings."""

from ._core import (
    Automorphism,
    BudgetExceeded,
    Error,
    InverseMismatch,
    MappingTorus,
    NoWitness,
    NotIdentity,
    NotPositive,
    ParseError,
    bcl_audit,
    bead_decomposition,
    brinkmann_check,
    classify,
    condition_power,
    corridor_lengths,
    load_automorphism,
    parse_automorphism,
    __version__,
)

__all__ = [
    "Automorphism",
    "BudgetExceeded",
    "Error",
    "InverseMismatch",
    "MappingTorus",
    "NoWitness",
    "NotIdentity",
    "NotPositive",
    "ParseError",
    "bcl_audit",
    "bead_decomposition",
    "brinkmann_check",
    "classify",
    "condition_power",
    "corridor_lengths",
    "load_automorphism",
    "parse_automorphism",
    "__version__",
]

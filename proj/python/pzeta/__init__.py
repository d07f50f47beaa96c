"""Exact p-local zeta functions of finitely generated nilpotent groups."""

from _pzeta import (  # noqa: F401
    BudgetExceeded,
    InputError,
    InsufficientPrecision,
    NoStabilization,
    Presentation,
    FiniteQuotient,
    build_quotient,
    enumerate_subgroup_count,
    expand,
    fit,
    lattice_canon,
    measure,
    oracle_check,
    subgroup_counts,
    twist_counts,
)

__all__ = [
    "BudgetExceeded",
    "InputError",
    "InsufficientPrecision",
    "NoStabilization",
    "Presentation",
    "FiniteQuotient",
    "build_quotient",
    "enumerate_subgroup_count",
    "expand",
    "fit",
    "lattice_canon",
    "measure",
    "oracle_check",
    "subgroup_counts",
    "twist_counts",
]

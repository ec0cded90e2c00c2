"""Exact Kochen-Specker set encoding, uncolorability proofs, and error-bound
analysis of the associated non-contextuality inequality.

Public surface: the exact vector model (:mod:`ksbound.model`), the ``ksset 1``
text format and bundled catalog (:mod:`ksbound.format`), coloring and defect
search (:mod:`ksbound.coloring`), analytic bounds and critical rates
(:mod:`ksbound.bounds`), and the seeded Monte Carlo validator
(:mod:`ksbound.simulate`).
"""
from .bounds import (
    BISECTION_TOLERANCE,
    CriticalRate,
    DeltaBound,
    Margin,
    TABLE_ROWS,
    TableReport,
    TableRow,
    critical_rate,
    delta_analytic,
    delta_lower_bound,
    epsilon_analytic,
    format_table,
    independent_error_lhs,
    inequality_margin,
    table_report,
)
from .coloring import (
    BRUTE_FORCE_LIMIT,
    ColoringResult,
    DefectReport,
    ValidationReport,
    Violation,
    assignment_defect,
    brute_force_coloring,
    find_coloring,
    min_defect,
    validate_orthogonality,
)
from .format import (
    ParseError,
    SetDocument,
    catalog_text,
    list_catalog,
    load_catalog,
    parse_document,
    parse_set,
    serialize_set,
)
from .model import (
    Context,
    DimensionMismatchError,
    ExactScalar,
    KsSet,
    RayVector,
    RingMismatchError,
    SetStats,
    build_stats,
    inner_product,
    is_square_free,
    make_set,
    same_ray,
    zero,
)
from .simulate import (
    ContextSimResult,
    InequalityVerdict,
    PairSimResult,
    SimSummary,
    TrialModel,
    default_base,
    empirical_inequality_check,
    simulate_context,
    simulate_model,
    simulate_pair,
)

__version__ = "0.1.0"

__all__ = [
    "BISECTION_TOLERANCE",
    "BRUTE_FORCE_LIMIT",
    "ColoringResult",
    "Context",
    "ContextSimResult",
    "CriticalRate",
    "DefectReport",
    "DeltaBound",
    "DimensionMismatchError",
    "ExactScalar",
    "InequalityVerdict",
    "KsSet",
    "Margin",
    "PairSimResult",
    "ParseError",
    "RayVector",
    "RingMismatchError",
    "SetDocument",
    "SetStats",
    "SimSummary",
    "TABLE_ROWS",
    "TableReport",
    "TableRow",
    "TrialModel",
    "ValidationReport",
    "Violation",
    "assignment_defect",
    "brute_force_coloring",
    "build_stats",
    "catalog_text",
    "critical_rate",
    "default_base",
    "delta_analytic",
    "delta_lower_bound",
    "empirical_inequality_check",
    "epsilon_analytic",
    "find_coloring",
    "format_table",
    "independent_error_lhs",
    "inequality_margin",
    "inner_product",
    "is_square_free",
    "list_catalog",
    "load_catalog",
    "make_set",
    "min_defect",
    "parse_document",
    "parse_set",
    "same_ray",
    "serialize_set",
    "simulate_context",
    "simulate_model",
    "simulate_pair",
    "table_report",
    "validate_orthogonality",
    "zero",
    "__version__",
]

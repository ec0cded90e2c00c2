"""Error-rate bounds for KS sets and the published six-row results table.

The central quantity is the inequality margin 1 - M*delta - N*epsilon: a
non-contextual description is impossible whenever it is positive.  Under
independent per-result flips at rate r the two rates become
delta(r) = 2r - 2r^2 and epsilon(r, d) = 1 - (1-r)^d - (d-1)(1-r)^(d-2) r^2,
and the largest r still forcing a contradiction is the root of
g(r) = M*delta(r) + N*epsilon(r, d) = 1, found here by bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

Number = Union[int, float, Fraction]

BISECTION_TOLERANCE = 1e-12
_BRACKET_HIGH = 0.5


@dataclass(frozen=True)
class Margin:
    margin: float
    contradiction: bool


def inequality_margin(M: int, N: int, delta: Number, epsilon: Number) -> Margin:
    """Margin 1 - M*delta - N*epsilon; contradiction iff strictly positive.

    Arithmetic is type-preserving: exact inputs (int/Fraction) give an exact
    margin, floats give a float whose sign agrees bit-for-bit with
    ``independent_error_lhs`` when the rates come from the analytic model.
    """
    if M < 0 or N < 0:
        raise ValueError("M and N must be non-negative")
    lhs = M * delta + N * epsilon
    margin = 1 - lhs
    return Margin(margin, margin > 0)


@dataclass(frozen=True)
class DeltaBound:
    value: Number
    vacuous: bool


def delta_lower_bound(N: int, M: int, epsilon: Number) -> DeltaBound:
    """Least rotation-error rate (1 - N*epsilon)/M compatible with no contradiction.

    Clamped below at zero; the bound is vacuous once epsilon >= 1/N.  Exact
    inputs give an exact Fraction (epsilon = 0 returns exactly 1/M).
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    num = 1 - N * epsilon
    vacuous = num <= 0
    if isinstance(num, float):
        return DeltaBound(max(0.0, num) / M, vacuous)
    value = Fraction(max(0, num)) / M
    return DeltaBound(value, vacuous)


def delta_analytic(r: float) -> float:
    """Mismatch rate of one shared result under two independent flips at rate r.

    Agreement survives when neither copy flips or both do: (1-r)^2 + r^2.
    """
    _check_rate(r)
    return 2 * r - 2 * r * r


def epsilon_analytic(r: float, d: int) -> float:
    """Context sum-error rate under d independent flips at rate r.

    A valid pattern stays valid when nothing flips, or the zero and exactly
    one of the d-1 ones flip together: (1-r)^d + (d-1)(1-r)^(d-2) r^2.
    """
    _check_rate(r)
    _check_dim(d)
    t = 1 - r
    return 1 - t**d - (d - 1) * t ** (d - 2) * r * r


def independent_error_lhs(r: float, N: int, M: int, d: int) -> float:
    """g(r) = M*delta_analytic(r) + N*epsilon_analytic(r, d).

    A contradiction with non-contextuality persists exactly while g(r) < 1.
    """
    return M * delta_analytic(r) + N * epsilon_analytic(r, d)


@dataclass(frozen=True)
class CriticalRate:
    """Root of g(r) = 1 with its bisection certificate."""

    r: float
    floor4: float
    bracket_low: float
    bracket_high: float
    iterations: int


def critical_rate(N: int, M: int, d: int) -> CriticalRate:
    """Smallest r > 0 with g(r) = 1, by bisection on [0, 1/2] to 1e-12.

    g(0) = 0 and g is strictly increasing at the scales of interest, so the
    root is the largest rate that still certifies a contradiction.  floor4
    truncates to 4 decimals for comparison against published tables (the
    rate is a supremum, so truncation, not rounding, is the faithful
    reduction).  Raises if g never reaches 1 on the bracket.
    """
    if N < 1 or M < 1:
        raise ValueError("N and M must be >= 1")
    _check_dim(d)
    lo, hi = 0.0, _BRACKET_HIGH
    if independent_error_lhs(hi, N, M, d) < 1:
        raise ValueError(f"no crossing: g({hi}) < 1 for N={N}, M={M}, d={d}")
    iterations = 0
    while hi - lo > BISECTION_TOLERANCE:
        mid = 0.5 * (lo + hi)
        if independent_error_lhs(mid, N, M, d) < 1:
            lo = mid
        else:
            hi = mid
        iterations += 1
    r = 0.5 * (lo + hi)
    return CriticalRate(
        r=r,
        floor4=math.floor(r * 10_000) / 10_000,
        bracket_low=lo,
        bracket_high=hi,
        iterations=iterations,
    )


@dataclass(frozen=True)
class TableRow:
    """One published parameter row; n_label keeps the extended(original) form."""

    name: str
    d: int
    n_label: str
    N: int
    M: int


#: The six published parameter rows (d=3 rows are extended vector sets whose
#: original sizes appear in parentheses; their coordinates are not bundled).
TABLE_ROWS: tuple[TableRow, ...] = (
    TableRow("Peres", 3, "57 (33)", 40, 96),
    TableRow("Kochen & Conway", 3, "51 (31)", 37, 91),
    TableRow("Schutte", 3, "49 (33)", 36, 87),
    TableRow("Kernaghan & Peres", 8, "36", 11, 72),
    TableRow("Kernaghan", 4, "20", 11, 30),
    TableRow("Cabello et al", 4, "18", 9, 18),
)


@dataclass(frozen=True)
class TableReport:
    rows: tuple[tuple[TableRow, CriticalRate], ...]

    def to_json_rows(self) -> list[dict]:
        out = []
        for row, crit in self.rows:
            n: object = int(row.n_label) if row.n_label.isdigit() else row.n_label
            out.append(
                {
                    "name": row.name,
                    "d": row.d,
                    "n": n,
                    "N": row.N,
                    "M": row.M,
                    "r_critical": crit.r,
                    "r_floor4": crit.floor4,
                }
            )
        return out


def table_report(rows: Optional[Sequence[TableRow]] = None) -> TableReport:
    """Compute the critical-rate column for the given (default published) rows."""
    rows = TABLE_ROWS if rows is None else tuple(rows)
    return TableReport(tuple((row, critical_rate(row.N, row.M, row.d)) for row in rows))


def format_table(report: TableReport) -> str:
    header = f"{'set':<20}{'d':>3}{'n':>10}{'N':>5}{'M':>5}   r"
    lines = [header, "-" * len(header)]
    for row, crit in report.rows:
        lines.append(
            f"{row.name:<20}{row.d:>3}{row.n_label:>10}{row.N:>5}{row.M:>5}   {crit.floor4:.4f}"
        )
    return "\n".join(lines)


def _check_rate(r: float) -> None:
    if not 0 <= r <= 1:
        raise ValueError(f"rate must lie in [0, 1], got {r}")


def _check_dim(d: int) -> None:
    if d < 3:
        raise ValueError(f"dimension must be >= 3, got {d}")

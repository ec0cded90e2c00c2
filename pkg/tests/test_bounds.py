"""Inequality margin, delta floor, analytic error model, critical rates."""
import math
from fractions import Fraction

import numpy as np
import pytest

import ksbound as kb
from ksbound import (
    TABLE_ROWS,
    critical_rate,
    delta_analytic,
    delta_lower_bound,
    epsilon_analytic,
    format_table,
    independent_error_lhs,
    inequality_margin,
    table_report,
)

# Independently frozen crossings (exact-rational bisection to 2^-120, see the
# oracle test below which re-derives them from scratch).
FROZEN_CROSSINGS = {
    "Peres": 0.0032181272018268737,
    "Kochen & Conway": 0.003427670255120685,
    "Schutte": 0.003562009359497873,
    "Kernaghan & Peres": 0.004353174034271855,
    "Kernaghan": 0.009760040515158398,
    "Cabello et al": 0.01421361344423254,
}
PUBLISHED_FLOORS = [0.0032, 0.0034, 0.0035, 0.0043, 0.0097, 0.0142]


def g_exact(r: Fraction, N: int, M: int, d: int) -> Fraction:
    """Independent exact-rational evaluation of the error-model left side."""
    t = 1 - r
    return M * (2 * r - 2 * r * r) + N * (1 - t**d - (d - 1) * t ** (d - 2) * r * r)


def crossing_oracle(N: int, M: int, d: int) -> float:
    lo, hi = Fraction(0), Fraction(1, 2)
    for _ in range(120):
        mid = (lo + hi) / 2
        if g_exact(mid, N, M, d) < 1:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def test_margin_ideal_case():
    m = inequality_margin(18, 9, 0, 0)
    assert m.margin == 1 and m.contradiction


def test_margin_boundary_no_contradiction():
    m = inequality_margin(18, 9, Fraction(1, 18), 0)
    assert m.margin == 0 and not m.contradiction


def test_margin_arithmetic():
    m = inequality_margin(96, 40, 0.005, 0.01)
    assert abs(m.margin - 0.12) < 1e-12
    assert m.contradiction


def test_delta_bound_at_zero_epsilon():
    b = delta_lower_bound(9, 18, 0)
    assert b.value == Fraction(1, 18)
    assert not b.vacuous


def test_delta_bound_vacuous():
    b = delta_lower_bound(9, 18, Fraction(1, 9))
    assert b.value == 0 and b.vacuous
    b2 = delta_lower_bound(9, 18, 0.5)
    assert b2.value == 0.0 and b2.vacuous


def test_delta_bound_arithmetic():
    b = delta_lower_bound(40, 96, 0.01)
    assert abs(b.value - 0.00625) < 1e-15


def test_delta_bound_requires_connections():
    with pytest.raises(ValueError):
        delta_lower_bound(9, 0, 0)


def test_delta_bound_monotone_in_epsilon():
    values = [delta_lower_bound(9, 18, e).value for e in np.linspace(0, 0.2, 50)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_delta_analytic_values():
    assert delta_analytic(0) == 0
    assert delta_analytic(0.5) == 0.5
    assert abs(delta_analytic(0.1) - 0.18) < 1e-15
    assert delta_analytic(0.0142) == pytest.approx(0.02799672, abs=1e-12)


def test_epsilon_analytic_values():
    assert epsilon_analytic(0, 3) == 0
    assert epsilon_analytic(0, 8) == 0
    assert abs(epsilon_analytic(0.1, 3) - 0.253) < 1e-15


def test_rate_domain_checks():
    with pytest.raises(ValueError):
        delta_analytic(1.5)
    with pytest.raises(ValueError):
        epsilon_analytic(-0.1, 3)
    with pytest.raises(ValueError):
        epsilon_analytic(0.1, 2)


def test_lhs_spot_values():
    assert independent_error_lhs(0, 9, 18, 4) == 0
    assert independent_error_lhs(0.0142, 9, 18, 4) == pytest.approx(
        0.9990643522071737, abs=1e-9
    )
    assert independent_error_lhs(0.0143, 9, 18, 4) == pytest.approx(
        1.0059363432482353, abs=1e-9
    )
    assert independent_error_lhs(0.0142, 9, 18, 4) < 1 < independent_error_lhs(
        0.0143, 9, 18, 4
    )


def test_lhs_is_identity_of_parts():
    rng = np.random.default_rng(5)
    for _ in range(500):
        r = float(rng.uniform(0, 1))
        d = int(rng.integers(3, 11))
        N = int(rng.integers(1, 100))
        M = int(rng.integers(1, 100))
        lhs = independent_error_lhs(r, N, M, d)
        assert lhs == M * delta_analytic(r) + N * epsilon_analytic(r, d)


def test_lhs_matches_exact_rational_evaluation():
    for row in TABLE_ROWS:
        for num in range(0, 50, 7):
            r = Fraction(num, 1000)
            exact = g_exact(r, row.N, row.M, row.d)
            assert independent_error_lhs(float(r), row.N, row.M, row.d) == pytest.approx(
                float(exact), abs=1e-12
            )


# --- critical rate ---------------------------------------------------------------


def test_critical_rate_matches_frozen_oracle():
    for row in TABLE_ROWS:
        rate = critical_rate(row.N, row.M, row.d)
        frozen = FROZEN_CROSSINGS[row.name]
        assert abs(rate.r - frozen) <= 5e-12, row.name
        assert rate.bracket_high - rate.bracket_low <= 1e-12
        assert rate.bracket_low <= rate.r <= rate.bracket_high


def test_crossing_oracle_rederivation():
    for row in TABLE_ROWS:
        assert crossing_oracle(row.N, row.M, row.d) == pytest.approx(
            FROZEN_CROSSINGS[row.name], abs=1e-15
        )


def test_critical_rate_published_floors():
    floors = [critical_rate(row.N, row.M, row.d).floor4 for row in TABLE_ROWS]
    assert floors == PUBLISHED_FLOORS


def test_critical_rate_bracket_stability():
    for row in TABLE_ROWS:
        r = critical_rate(row.N, row.M, row.d).r
        assert independent_error_lhs(r - 1e-9, row.N, row.M, row.d) < 1
        assert independent_error_lhs(r + 1e-9, row.N, row.M, row.d) > 1


def test_lhs_strictly_increasing_near_origin():
    for row in TABLE_ROWS:
        rs = np.linspace(0, 0.05, 501)
        vals = [independent_error_lhs(float(r), row.N, row.M, row.d) for r in rs]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_smaller_sets_tolerate_more_noise():
    # table rows are ordered largest set first; r* must increase down the rows
    rates = [critical_rate(row.N, row.M, row.d).r for row in TABLE_ROWS]
    assert all(a < b for a, b in zip(rates, rates[1:]))


def test_critical_rate_preconditions():
    with pytest.raises(ValueError):
        critical_rate(0, 18, 4)
    with pytest.raises(ValueError):
        critical_rate(9, 0, 4)
    with pytest.raises(ValueError):
        critical_rate(9, 18, 2)


def test_margin_sign_agrees_with_lhs():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        r = float(rng.uniform(0, 0.2))
        d = int(rng.integers(3, 9))
        N = int(rng.integers(1, 60))
        M = int(rng.integers(1, 120))
        g = independent_error_lhs(r, N, M, d)
        m = inequality_margin(M, N, delta_analytic(r), epsilon_analytic(r, d))
        assert m.contradiction == (g < 1)


# --- table -----------------------------------------------------------------------


def test_table_report_default_rows():
    rep = table_report()
    rows = rep.to_json_rows()
    assert [row["r_floor4"] for row in rows] == PUBLISHED_FLOORS
    assert rows[0]["n"] == "57 (33)"
    assert rows[5]["n"] == 18
    assert set(rows[0]) == {"name", "d", "n", "N", "M", "r_critical", "r_floor4"}


def test_table_rows_from_catalog_stats(catalog_sets):
    by_name = {
        "cabello18": 0.0142,
        "kernaghan20": 0.0097,
        "kernaghan-peres36": 0.0043,
    }
    for ks in catalog_sets:
        st = kb.build_stats(ks)
        row = kb.TableRow(ks.name, ks.dimension, str(st.n), st.N, st.M)
        rep = table_report([row])
        assert rep.to_json_rows()[0]["r_floor4"] == by_name[ks.name]


def test_format_table_layout():
    text = format_table(table_report())
    lines = text.splitlines()
    assert len(lines) == 8  # header, rule, six rows
    assert lines[0].split()[:1] == ["set"]
    for floor in ("0.0032", "0.0034", "0.0035", "0.0043", "0.0097", "0.0142"):
        assert floor in text
    one_row = format_table(table_report([TABLE_ROWS[-1]]))
    assert len(one_row.splitlines()) == 3
    assert "Cabello" in one_row

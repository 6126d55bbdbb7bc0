from fractions import Fraction

import pytest

from tepir.bounds import (bound_report, capacity_e_ge_t, figure_rows,
                          fraction_to_decimal, inner_bound, outer_bound,
                          secrecy_bounds, sweep)
from tepir.params import InvalidParameters


def test_capacity_examples():
    assert capacity_e_ge_t(10, 3, Fraction(1)) == Fraction(7, 10)
    assert capacity_e_ge_t(10, 3, Fraction(1, 10)) == 0
    assert capacity_e_ge_t(10, 3, Fraction(3, 7)) == Fraction(7, 10)  # exactly enough
    assert capacity_e_ge_t(10, 0, Fraction(0)) == 1
    with pytest.raises(InvalidParameters):
        capacity_e_ge_t(4, 4, Fraction(1))


def test_outer_special_cases():
    for n in range(2, 8):
        for t in range(1, n + 1):
            for k in range(1, 6):
                if t <= n:
                    assert outer_bound(n, k, t, t if t < n else t - 1) >= 0
        for t in range(1, n):
            for k in range(1, 6):
                assert outer_bound(n, k, t, t) == 1 - Fraction(t, n)
                x = Fraction(t, n)
                tpir = (1 - x) / (1 - x ** k)
                assert outer_bound(n, k, t, 0) == tpir
                assert inner_bound(n, k, t, 0) == tpir
        for e in range(0, n):
            for k in range(1, 6):
                assert outer_bound(n, k, n, e) == Fraction(n - e, n * k)
                assert inner_bound(n, k, n, e) == Fraction(n - e, n * k)
    assert outer_bound(4, 2, 4, 1) == Fraction(3, 8)


def test_inner_golden_rates():
    assert inner_bound(3, 2, 2, 1) == Fraction(13, 30)
    assert inner_bound(4, 2, 2, 1) == Fraction(13, 24)
    assert inner_bound(4, 2, 3, 1) == Fraction(25, 56)
    assert inner_bound(4, 2, 3, 2) == Fraction(9, 28)
    assert inner_bound(3, 3, 2, 1) == Fraction(62, 171)


def test_inner_le_outer_grid():
    for n in range(1, 9):
        for t in range(0, n + 1):
            for e in range(0, t + 1):
                for k in range(1, 12):
                    assert inner_bound(n, k, t, e) <= outer_bound(n, k, t, e)


def test_secrecy_examples():
    assert secrecy_bounds(3, 2, 2, 1)[1] == Fraction(10, 13)
    assert secrecy_bounds(3, 3, 2, 1)[1] == Fraction(57, 62)
    assert secrecy_bounds(5, 3, 2, 0) == (0, 0)
    lower, achieved = secrecy_bounds(4, 2, 4, 1)
    assert lower == achieved == Fraction(2 * 1, 3)
    with pytest.raises(InvalidParameters):
        secrecy_bounds(4, 2, 4, 4)


def test_secrecy_achieved_at_least_lower():
    for n in range(2, 8):
        for t in range(1, n + 1):
            for e in range(0, t + 1):
                if t == n and e == n:
                    continue
                for k in range(1, 8):
                    lower, achieved = secrecy_bounds(n, k, t, e)
                    assert achieved >= lower


def test_bound_report_fields():
    rep = bound_report(3, 2, 2, 1)
    assert rep.outer == Fraction(7, 15)
    assert rep.inner == Fraction(13, 30)
    assert rep.gap == Fraction(1, 30)
    assert rep.capacity_e_ge_t is None
    rep = bound_report(10, 4, 3, 3)
    assert rep.capacity_e_ge_t == Fraction(7, 10)
    d = rep.as_dict()
    assert d["params"] == {"n": 10, "k": 4, "t": 3, "e": 3}


def test_sweep_rows():
    rows = sweep(10, 10, "e", 3, range(3, 11))
    assert [r.x for r in rows] == [Fraction(t, 10) for t in range(3, 11)]
    spot = rows[4]  # T = 7
    assert abs(float(spot.outer) - 0.304984) < 1e-6
    assert abs(float(spot.inner) - 0.278721) < 1e-6
    assert rows[0].outer == Fraction(7, 10)  # T = E row


def test_gap_decay_between_figure_ks():
    for t in range(3, 11):
        gap10 = outer_bound(10, 10, t, 3) - inner_bound(10, 10, t, 3)
        gap100 = outer_bound(10, 100, t, 3) - inner_bound(10, 100, t, 3)
        assert gap100 < gap10 or (gap10 == 0 and gap100 == 0)
    gap1000 = outer_bound(10, 1000, 7, 3) - inner_bound(10, 1000, 7, 3)
    assert gap1000 < Fraction(1, 1000)


def test_fraction_to_decimal():
    assert fraction_to_decimal(Fraction(1, 3)) == "0.333333333333"
    assert fraction_to_decimal(Fraction(0)) == "0.000000000000"
    assert fraction_to_decimal(Fraction(7, 10)) == "0.700000000000"
    assert fraction_to_decimal(Fraction(-1, 8), 4) == "-0.1250"


def test_figure_rows():
    header, rows = figure_rows(1, 10)
    assert header == ["t_over_n", "outer", "inner", "gap"]
    assert len(rows) == 8  # T = 3..10
    assert rows[0][0] == "0.300000000000"
    assert rows[0][1] == "0.700000000000"  # E = T row: outer is exactly 1 - T/N
    header, rows = figure_rows(2, 100)
    assert header == ["e_over_n", "outer", "inner", "gap"]
    assert len(rows) == 8  # E = 0..7
    assert rows[0][1] == rows[0][2]  # E = 0: outer equals inner

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mobius_criterion.criterion import (
    ScanRecord,
    _with_running_sup,
    geometric_grid,
    growth_exponent,
    partial_sum_check,
    partial_sum_mismatches,
    scan_difference,
    scan_double_sum,
    series_coefficient,
    series_coefficients,
)
from mobius_criterion.doublesum import double_sum_blocked
from mobius_criterion.errors import PreconditionError
from mobius_criterion.mertens import mertens_table

from conftest import mertens_oracle, mu_oracle_table


def test_growth_exponent_examples():
    assert growth_exponent(2, 3) == pytest.approx(math.log(2) / math.log(3))
    assert round(growth_exponent(2, 3), 4) == 0.6309
    assert growth_exponent(0, 10) is None
    assert growth_exponent(5, 1) is None
    assert growth_exponent(1, 7) == 0.0
    assert growth_exponent(-9, 3) == pytest.approx(2.0)


def test_scan_double_sum_small():
    recs = scan_double_sum(2, 3)
    assert [r.magnitude for r in recs] == [1, 2]
    assert recs[0].exponent == 0.0 and recs[0].running_sup == 0.0
    assert recs[1].exponent == pytest.approx(0.630930, abs=5e-7)
    assert recs[1].running_sup == recs[1].exponent
    single = scan_double_sum(2, 2)
    assert len(single) == 1 and single[0].running_sup == 0.0


def test_scan_double_sum_to_200():
    # running sup frozen from the pure-Python double loop: S(53) = 52
    recs = scan_double_sum(2, 200)
    assert recs[-1].running_sup == pytest.approx(math.log(52) / math.log(53))
    assert f"{recs[-1].running_sup:.6f}" == "0.995202"
    assert recs[51] == (53, 52, recs[51].exponent, recs[51].running_sup)


def test_scan_double_sum_stride():
    recs = scan_double_sum(10, 100, 30)
    assert [r.n for r in recs] == [10, 40, 70, 100]


def test_scan_double_sum_preconditions():
    with pytest.raises(PreconditionError):
        scan_double_sum(1, 5)
    with pytest.raises(PreconditionError):
        scan_double_sum(5, 4)
    with pytest.raises(PreconditionError):
        scan_double_sum(2, 4, 0)


def test_scan_difference_examples():
    (r4,) = scan_difference([4])
    assert (r4.magnitude, r4.exponent) == (-1, 0.0)
    (r10,) = scan_difference([10])
    assert r10.magnitude == 3
    assert r10.exponent == pytest.approx(0.4771, abs=5e-5)
    (r1,) = scan_difference([1])
    assert r1.exponent is None and r1.running_sup is None


def test_null_exponents_never_move_sup():
    recs = _with_running_sup([(5, 2), (6, 0), (7, 1), (1, 9)])
    assert [r.running_sup for r in recs] == [recs[0].exponent] * 4


@given(st.lists(st.tuples(st.integers(1, 10**6), st.integers(-(10**6), 10**6)), max_size=40))
def test_running_sup_monotone(pairs):
    recs = _with_running_sup(pairs)
    sups = [r.running_sup for r in recs if r.running_sup is not None]
    assert sups == sorted(sups)
    exps = [r.exponent for r in recs if r.exponent is not None]
    if exps:
        assert recs[-1].running_sup == max(exps)
    for r in recs:
        assert (r.exponent is None) == (r.magnitude == 0 or r.n == 1)


def test_views_linked_by_exact_identity():
    n_max = 150
    table = mertens_table(n_max * n_max)
    s_recs = scan_double_sum(2, n_max)
    d_recs = scan_difference([n * n for n in range(2, n_max + 1)])
    for s, d in zip(s_recs, d_recs):
        assert d.n == s.n**2
        assert abs(s.magnitude + 2 * table(s.n)) == abs(d.magnitude)


@pytest.mark.parametrize("m, c", [(1, 1), (2, -3), (6, 3), (4, 2), (3, -1), (8, 0)])
def test_series_coefficient_examples(m, c):
    assert series_coefficient(m) == (m, c)


def test_series_coefficients_definition():
    mu = mu_oracle_table(500)
    c = series_coefficients(500)
    for m in range(1, 501):
        expected = mu[m] - (2 * mu[m // 2] if m % 2 == 0 else 0)
        assert c[m] == expected == series_coefficient(m).c


@pytest.mark.parametrize("x", [1, 2, 3, 4, 10, 99, 1000])
def test_partial_sum_check(x):
    assert partial_sum_check(x)
    assert sum(series_coefficient(m).c for m in range(1, x + 1)) == (
        mertens_oracle(x) - 2 * mertens_oracle(x // 2)
    )


def test_partial_sum_four_by_hand():
    assert 1 - 3 - 1 + 2 == -1


def test_partial_sum_sweep():
    assert partial_sum_mismatches(10**5) == []


def test_geometric_grid():
    grid = geometric_grid(10**3)
    assert grid[:6] == [1, 2, 3, 4, 5, 6]
    assert 10 in grid and 100 in grid and 1000 == grid[-1]
    assert grid == sorted(set(grid))
    for i in range(0, 37):
        x = math.floor(10 ** (i / 12))
        assert x in grid or x > 10**3
    assert geometric_grid(10**8, budget=5) == [1, 2, 3, 4, 5]
    assert geometric_grid(10**8)[-1] == 10**8

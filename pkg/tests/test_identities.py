import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobius_criterion.errors import DomainError, PreconditionError
from mobius_criterion.identities import (
    bracket,
    lemma3_sum,
    lemma4_expected,
    lemma4_sum,
    meissel_sum,
    nested_floor_check,
    verify_bracket,
    verify_lemmas,
    verify_lemmas_random,
    verify_meissel,
    verify_nested_floor,
    verify_nested_floor_random,
)
from mobius_criterion.moebius import mobius_array

from conftest import mu_oracle_table

u64 = st.integers(1, 2**64 - 1)


def brute_lemma4(m, j):
    mu = mu_oracle_table(m)
    return sum((m // (j * k) - 2 * (m // (2 * j * k))) * mu[k] for k in range(1, m + 1))


@pytest.mark.parametrize("m, j, k, value", [(4, 2, 2, 1), (4, 1, 1, 0), (5, 2, 3, 0), (7, 1, 1, 1)])
def test_bracket_examples(m, j, k, value):
    term = bracket(m, j, k)
    assert term.value == value
    assert (term.m, term.j, term.k) == (m, j, k)


@pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, 0)])
def test_bracket_rejects_zero(args):
    with pytest.raises(DomainError):
        bracket(*args)


@given(u64, u64, u64)
def test_bracket_is_parity(m, j, k):
    value = bracket(m, j, k).value
    assert value in (0, 1)
    assert value == (m // (j * k)) % 2


@given(st.integers(1, 10**6), st.integers(1, 10**6), st.integers(1, 10**6))
def test_bracket_large_product_vanishes(m, j, k):
    if j * k > m:
        assert bracket(m, j, k).value == 0


def test_nested_floor_examples():
    assert nested_floor_check(100, 7, 3)
    assert (100 // 7) // 3 == 4 == 100 // 21
    assert nested_floor_check(12345, 1, 1)


@given(u64, u64, u64)
def test_nested_floor_property(m, j, k):
    assert nested_floor_check(m, j, k)


@pytest.mark.parametrize("m", [1, 2, 5, 10, 97, 10**4])
def test_meissel_examples(m):
    assert meissel_sum(m) == 1


def test_meissel_five_by_hand():
    assert 5 * 1 + 2 * (-1) + 1 * (-1) + 1 * 0 + 1 * (-1) == 1
    assert meissel_sum(5, mobius_array(5)) == 1


def test_meissel_short_table():
    with pytest.raises(PreconditionError):
        meissel_sum(10, mobius_array(5))


@pytest.mark.parametrize("m, j", [(10, 3), (7, 7), (400, 1), (400, 133)])
def test_lemma3_examples(m, j):
    assert lemma3_sum(m, j) == 1


@pytest.mark.parametrize("m, j, expected", [(10, 3, -1), (10, 7, 1), (2, 2, 1), (10, 5, -1), (11, 5, -1), (11, 6, 1)])
def test_lemma4_examples(m, j, expected):
    assert lemma4_sum(m, j) == expected == brute_lemma4(m, j)
    assert lemma4_expected(m, j) == expected


def test_lemma4_ten_three_term_by_term():
    mu = mu_oracle_table(10)
    terms = [bracket(10, 3, k).value * mu[k] for k in range(1, 11)]
    assert terms[:3] == [1, -1, -1] and sum(terms) == -1


@pytest.mark.parametrize("fn", [lemma3_sum, lemma4_sum])
def test_lemma_precondition(fn):
    with pytest.raises(PreconditionError):
        fn(5, 6)


def test_lemma4_boundaries():
    # j <= m/2 uses exact division: for odd m, (m-1)/2 is below and (m+1)/2 above
    mu = mobius_array(400)
    for m in range(2, 401):
        lo, hi = m // 2, m // 2 + 1
        assert lemma4_sum(m, lo, mu) == -1
        if hi <= m:
            assert lemma4_sum(m, hi, mu) == 1


def test_lemma4_matches_brute_force_small():
    for m in range(1, 60):
        for j in range(1, m + 1):
            assert lemma4_sum(m, j) == brute_lemma4(m, j) == lemma4_expected(m, j)


def test_sweeps_pass_at_small_scale():
    assert verify_meissel(3000).passed
    assert verify_meissel(3000, method="blocked").passed
    assert all(r.passed for r in verify_lemmas(120))
    assert all(r.passed for r in verify_lemmas_random(200, 5000, seed=1))
    assert verify_nested_floor(80).passed
    assert verify_nested_floor_random(500, seed=2).passed
    report = verify_bracket(150)
    assert report.passed and report.checked == sum(m * m for m in range(1, 151))


def test_sweep_reports_counterexample():
    # the lemma-3 identity is only claimed for j <= m; feeding j > m must show up
    import numpy as np

    from mobius_criterion.identities import _lemma_reports

    r3, r4 = _lemma_reports(np.array([5, 5]), np.array([1, 6]), "forced")
    assert not r3.passed and r3.failures == 1
    assert r3.first_failure == (5, 6, 0)
    assert r4.first_failure == (5, 6, 0)

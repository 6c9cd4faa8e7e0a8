import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mobius_criterion.errors import (
    CheckpointFormatError,
    DomainError,
    PreconditionError,
    ResourceError,
)
from mobius_criterion.mertens import (
    CheckpointRecord,
    checkpoint_read,
    checkpoint_write,
    difference,
    differences,
    format_checkpoints,
    merge_checkpoints,
    mertens,
    mertens_many,
    mertens_table,
    parse_checkpoints,
)
from mobius_criterion.moebius import sieve_full

from conftest import mertens_oracle, mu_oracle_table


@pytest.mark.parametrize(
    "n, expected",
    [(10, (1, 0, -1, -1, -2, -1, -2, -2, -2, -1)), (1, (1,)), (4, (1, 0, -1, -1))],
)
def test_table_examples(n, expected):
    table = mertens_table(n)
    assert table.prefix[0] == 0
    assert tuple(table.prefix[1:].tolist()) == expected


def test_table_matches_oracle():
    mu = mu_oracle_table(3000)
    assert mertens_table(3000).prefix.tolist() == np.cumsum(mu).tolist()


def test_table_step_property():
    table = mertens_table(10**5)
    assert np.array_equal(np.diff(table.prefix), sieve_full(10**5).values)
    assert table(1) == 1
    assert np.all(np.abs(table.prefix) <= np.arange(10**5 + 1))


def test_table_budget():
    with pytest.raises(ResourceError):
        mertens_table(10**6, memory_budget=10**3)


@pytest.mark.parametrize(
    "queries, expected",
    [
        ((10, 100), ((10, -1), (100, 1))),
        ((1,), ((1, 1),)),
        ((10000,), ((10000, mertens_oracle(10000)),)),
    ],
)
def test_mertens_many_examples(queries, expected):
    assert [tuple(r) for r in mertens_many(queries)] == list(expected)


def test_mertens_many_matches_table_across_segments():
    table = mertens_table(50000)
    qs = sorted(random.Random(3).sample(range(1, 50001), 300))
    got = mertens_many(qs, segment_len=997)
    assert got == [CheckpointRecord(q, table(q)) for q in qs]


@pytest.mark.parametrize("bad", [(10, 5), (0, 3), (4, 4)])
def test_mertens_many_rejects_bad_queries(bad):
    with pytest.raises(PreconditionError):
        mertens_many(bad)


def test_mertens_many_empty():
    assert mertens_many([]) == []


@pytest.mark.parametrize("x, d", [(4, -1), (1, 1), (10, 3)])
def test_difference_examples(x, d):
    sample = difference(x)
    assert sample.d == d
    assert sample.d == sample.m_x - 2 * sample.m_half


def test_difference_rejects_zero():
    with pytest.raises(DomainError):
        difference(0)


def test_differences_match_table():
    table = mertens_table(20000)
    xs = list(range(1, 20001, 37))
    for s in differences(xs, segment_len=512):
        assert s.d == table(s.x) - 2 * table(s.x // 2)


def test_mertens_zero_convention():
    assert mertens(0) == 0


# -- checkpoint files ----------------------------------------------------------


def test_checkpoint_round_trip(tmp_path):
    path = tmp_path / "ck.tsv"
    checkpoint_write([(10, -1)], path)
    assert checkpoint_read(path) == [(10, -1)]
    assert path.read_bytes() == b"10\t-1\n"


def test_checkpoint_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_bytes(b"")
    assert checkpoint_read(path) == []


def test_checkpoint_bytes_exact():
    text = format_checkpoints([(1, 1), (10, -1), (10000, -23)])
    assert text == "1\t1\n10\t-1\n10000\t-23\n"


@given(st.lists(st.integers(0, 2**64 - 1), unique=True, max_size=30))
def test_checkpoint_text_round_trip(xs):
    records = [CheckpointRecord(x, -(x // 3)) for x in sorted(xs)]
    assert parse_checkpoints(format_checkpoints(records)) == records


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("10\t-1\n20 4\n", 2),
        ("10\t-1\n\n", 2),
        ("abc\t1\n", 1),
        ("10\t+1\n", 1),
        ("10\t-1 \n", 1),
        ("5\t9\n", 1),
        ("1\t1\r\n", 1),
    ],
)
def test_checkpoint_parse_errors(text, lineno):
    with pytest.raises(CheckpointFormatError) as info:
        parse_checkpoints(text)
    assert info.value.lineno == lineno


def test_checkpoint_descending_rejected(tmp_path):
    with pytest.raises(PreconditionError):
        parse_checkpoints("10\t-1\n4\t-1\n")
    with pytest.raises(PreconditionError):
        checkpoint_write([(10, -1), (4, -1)], tmp_path / "x")


def test_merge_checkpoints():
    assert merge_checkpoints([(4, -1)], [(1, 1), (4, -1)]) == [(1, 1), (4, -1)]
    with pytest.raises(PreconditionError):
        merge_checkpoints([(4, -1)], [(4, 0)])


def test_resume_from_million():
    direct = mertens_many([10**6, 2 * 10**6])
    resumed = mertens_many([2 * 10**6], checkpoints=[direct[0]])
    assert resumed == [direct[1]]


def test_resume_uses_checkpoint_values():
    # a deliberately wrong checkpoint must propagate, proving the jump happened
    got = mertens_many([1000], checkpoints=[(999, 0)], segment_len=10)
    assert got[0].m_of_x == 0 + sieve_full(1000).at(1000)


def test_on_segment_reports_prefix_values():
    seen = []
    mertens_many([5000], segment_len=1000, on_segment=seen.append)
    table = mertens_table(5000)
    assert [r.x for r in seen] == [1000, 2000, 3000, 4000, 5000]
    assert all(r.m_of_x == table(r.x) for r in seen)


def test_bridging_bound():
    n_max = 300
    table = mertens_table((n_max + 1) ** 2)
    for n in range(1, n_max + 1):
        xs = np.arange(n * n, (n + 1) ** 2)
        jump = np.abs(table.prefix[xs] - table(n * n))
        half = np.abs(table.prefix[xs // 2] - table(n * n // 2))
        d_x = table.prefix[xs] - 2 * table.prefix[xs // 2]
        d_n = table(n * n) - 2 * table(n * n // 2)
        assert jump.max() <= 2 * n
        assert half.max() <= n
        assert np.abs(d_x - d_n).max() <= 4 * n

"""Shared brute-force oracles.

Everything here is deliberately slow and independent of the package's
sieves: Mobius values come from sympy's factorization, floors from plain
Python integers.
"""

from __future__ import annotations

from functools import lru_cache

import pytest
from sympy import mobius as sympy_mobius


@lru_cache(maxsize=None)
def mu_oracle_table(n: int) -> tuple[int, ...]:
    """``(mu(0), mu(1), ..., mu(n))`` with ``mu(0) = 0``."""
    return (0,) + tuple(int(sympy_mobius(i)) for i in range(1, n + 1))


def mertens_oracle(x: int) -> int:
    return sum(mu_oracle_table(x))


def double_sum_oracle(n: int) -> int:
    mu = mu_oracle_table(n)
    m = n * n
    return sum(
        (m // (j * k) - 2 * (m // (2 * j * k))) * mu[j] * mu[k]
        for j in range(1, n + 1)
        for k in range(1, n + 1)
    )


@pytest.fixture(scope="session")
def mu_small():
    return mu_oracle_table(2000)

"""Exact checks of the floor/Mobius identities behind the double sum.

Scalar functions work on Python integers (no overflow, any size) and
return the computed value so a failing case shows what it produced.
The ``verify_*`` sweeps run the same arithmetic inside numba kernels over
whole ranges and collect violations into a :class:`SweepReport`.

Conventions: ``bracket(m, j, k) = m // (j*k) - 2 * (m // (2*j*k))``. A product
``j*k > m`` short-circuits to a zero floor, which keeps the int64 kernels
free of overflow for any 64-bit inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import DomainError, PreconditionError
from .moebius import U64_MAX, mobius_array


class BracketTerm(NamedTuple):
    m: int
    j: int
    k: int
    value: int


@dataclass(frozen=True)
class SweepReport:
    name: str
    checked: int
    failures: int
    first_failure: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0


def _positive(*args: int) -> None:
    for a in args:
        if a < 1:
            raise DomainError(f"arguments must be positive integers, got {args}")


def _floor_div_prod(m: int, j: int, k: int) -> int:
    # floor(m / (j*k)) without forming j*k when it cannot matter
    if j > m or k > m // j:
        return 0
    return m // (j * k)


def bracket(m: int, j: int, k: int) -> BracketTerm:
    """``m // (jk) - 2 * (m // (2jk))``, which is always 0 or 1."""
    _positive(m, j, k)
    value = _floor_div_prod(m, j, k) - 2 * _floor_div_prod(m, 2 * j, k)
    return BracketTerm(m, j, k, value)


def nested_floor_check(m: int, j: int, k: int) -> bool:
    """Whether ``(m // j) // k == m // (j*k)``."""
    _positive(m, j, k)
    return (m // j) // k == _floor_div_prod(m, j, k)


def _mu_for(m: int, mu: np.ndarray | None) -> np.ndarray:
    if mu is None:
        return mobius_array(m)
    if len(mu) <= m:
        raise PreconditionError(f"mu table covers up to {len(mu) - 1}, need {m}")
    return mu


def meissel_sum(m: int, mu: np.ndarray | None = None) -> int:
    """Sum of ``(m // k) * mu(k)`` for ``k = 1..m``; equals 1 for every ``m >= 1``.

    ``mu`` may be a precomputed ``mu(0..N)`` array with ``N >= m``.
    """
    _positive(m)
    mu = _mu_for(m, mu)
    ks = np.arange(1, m + 1, dtype=np.int64)
    return int(np.dot(m // ks, mu[1 : m + 1].astype(np.int64)))


def _lemma_terms(m: int, j: int, mu: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    _positive(m, j)
    if j > m:
        raise PreconditionError(f"the identity is stated for j <= m, got j={j} > m={m}")
    mu = _mu_for(m, mu)
    # k > m // j means j*k > m, where every floor vanishes
    jk = j * np.arange(1, m // j + 1, dtype=np.int64)
    return jk, mu[1 : m // j + 1].astype(np.int64)


def lemma3_sum(m: int, j: int, mu: np.ndarray | None = None) -> int:
    """Sum of ``(m // (j*k)) * mu(k)`` over ``k = 1..m``; expected 1 for ``j <= m``."""
    jk, mus = _lemma_terms(m, j, mu)
    return int(np.dot(m // jk, mus))


def lemma4_sum(m: int, j: int, mu: np.ndarray | None = None) -> int:
    """Sum of ``bracket(m, j, k) * mu(k)`` over ``k = 1..m``."""
    jk, mus = _lemma_terms(m, j, mu)
    return int(np.dot(m // jk - 2 * (m // (2 * jk)), mus))


def lemma4_expected(m: int, j: int) -> int:
    """-1 when ``j <= m/2`` (exact rational comparison), else +1."""
    return -1 if 2 * j <= m else 1


# -- numba kernels -------------------------------------------------------------


@njit(cache=True)
def _meissel_direct(mu, m):
    s = 0
    for k in range(1, m + 1):
        if mu[k] != 0:
            s += (m // k) * mu[k]
    return s


@njit(cache=True)
def _meissel_blocked(prefix, m):
    s = 0
    k = 1
    while k <= m:
        q = m // k
        k2 = m // q
        s += q * (prefix[k2] - prefix[k - 1])
        k = k2 + 1
    return s


@njit(cache=True)
def _meissel_failures(mu, prefix, m_max, blocked):
    checked = 0
    failures = 0
    first_m = -1
    first_v = 0
    for m in range(1, m_max + 1):
        if blocked:
            v = _meissel_blocked(prefix, m)
        else:
            v = _meissel_direct(mu, m)
        checked += 1
        if v != 1:
            failures += 1
            if first_m < 0:
                first_m = m
                first_v = v
    return checked, failures, first_m, first_v


@njit(cache=True)
def _lemma_pair(mu, m, j):
    s3 = 0
    s4 = 0
    for k in range(1, m // j + 1):
        if mu[k] != 0:
            jk = j * k
            q = m // jk
            s3 += q * mu[k]
            s4 += (q - 2 * (m // (2 * jk))) * mu[k]
    return s3, s4


@njit(cache=True)
def _lemma_failures(mu, ms, js):
    # columns: lemma3 failures, lemma4 failures; first offending index for each
    f3 = 0
    f4 = 0
    i3 = -1
    i4 = -1
    for i in range(len(ms)):
        m = ms[i]
        j = js[i]
        s3, s4 = _lemma_pair(mu, m, j)
        if s3 != 1:
            f3 += 1
            if i3 < 0:
                i3 = i
        expect = -1 if 2 * j <= m else 1
        if s4 != expect:
            f4 += 1
            if i4 < 0:
                i4 = i
    return f3, f4, i3, i4


@njit(cache=True)
def _nested_floor_failures(limit):
    failures = 0
    first = (-1, -1, -1)
    for m in range(1, limit + 1):
        for j in range(1, limit + 1):
            inner = m // j
            for k in range(1, limit + 1):
                if j * k > m:
                    direct = 0
                else:
                    direct = m // (j * k)
                if inner // k != direct:
                    failures += 1
                    if first[0] < 0:
                        first = (m, j, k)
    return failures, first


@njit(cache=True)
def _bracket_failures(m_max):
    checked = 0
    failures = 0
    first = (-1, -1, -1, 0)
    for m in range(1, m_max + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                jk = j * k
                if jk > m:
                    value = 0
                    floor = 0
                else:
                    floor = m // jk
                    value = floor - 2 * (m // (2 * jk))
                checked += 1
                if (value != 0 and value != 1) or value != floor % 2:
                    failures += 1
                    if first[0] < 0:
                        first = (m, j, k, value)
    return checked, failures, first


# -- sweeps --------------------------------------------------------------------


def verify_meissel(m_max: int, *, method: str = "direct") -> SweepReport:
    """Check ``meissel_sum(m) == 1`` for every ``m <= m_max``.

    ``method="direct"`` evaluates every term; ``"blocked"`` groups the ``k``
    with equal ``m // k`` and reads ``mu`` sums off the Mertens prefix.
    """
    if method not in ("direct", "blocked"):
        raise ValueError(f"unknown method {method!r}")
    mu = mobius_array(m_max)
    prefix = np.cumsum(mu, dtype=np.int64)
    checked, failures, first_m, first_v = _meissel_failures(
        mu, prefix, m_max, method == "blocked"
    )
    first = (first_m, first_v) if failures else None
    return SweepReport(f"meissel[{method}] m<={m_max}", checked, failures, first)


def _exhaustive_pairs(m_max: int) -> tuple[np.ndarray, np.ndarray]:
    ms = np.repeat(np.arange(1, m_max + 1, dtype=np.int64), np.arange(1, m_max + 1))
    js = np.concatenate([np.arange(1, m + 1, dtype=np.int64) for m in range(1, m_max + 1)])
    return ms, js


def _lemma_reports(ms: np.ndarray, js: np.ndarray, label: str) -> tuple[SweepReport, SweepReport]:
    mu = mobius_array(int(ms.max()))
    f3, f4, i3, i4 = _lemma_failures(mu, ms, js)
    first3 = first4 = None
    if f3:
        m, j = int(ms[i3]), int(js[i3])
        first3 = (m, j, int(_lemma_pair(mu, m, j)[0]))
    if f4:
        m, j = int(ms[i4]), int(js[i4])
        first4 = (m, j, int(_lemma_pair(mu, m, j)[1]))
    return (
        SweepReport(f"lemma3 {label}", len(ms), int(f3), first3),
        SweepReport(f"lemma4 {label}", len(ms), int(f4), first4),
    )


def verify_lemmas(m_max: int) -> tuple[SweepReport, SweepReport]:
    """Exhaustive lemma 3 / lemma 4 checks over all ``1 <= j <= m <= m_max``."""
    ms, js = _exhaustive_pairs(m_max)
    return _lemma_reports(ms, js, f"all j<=m<={m_max}")


def verify_lemmas_random(
    count: int, m_max: int, *, seed: int = 0
) -> tuple[SweepReport, SweepReport]:
    rng = random.Random(seed)
    ms = np.empty(count, dtype=np.int64)
    js = np.empty(count, dtype=np.int64)
    for i in range(count):
        m = rng.randint(1, m_max)
        ms[i] = m
        js[i] = rng.randint(1, m)
    return _lemma_reports(ms, js, f"{count} random m<={m_max}")


def verify_nested_floor(limit: int) -> SweepReport:
    """Nested-floor identity for every ``m, j, k <= limit``."""
    failures, first = _nested_floor_failures(limit)
    return SweepReport(
        f"nested floor m,j,k<={limit}",
        limit**3,
        int(failures),
        tuple(int(v) for v in first) if failures else None,
    )


def verify_nested_floor_random(count: int, *, seed: int = 0, bits: int = 64) -> SweepReport:
    """Nested-floor identity on random triples drawn from the unsigned ``bits``-bit range."""
    rng = random.Random(seed)
    hi = min(2**bits - 1, U64_MAX)
    failures = 0
    first = None
    for _ in range(count):
        m = rng.randint(1, hi)
        # mix scales so both the j*k <= m and j*k > m branches are exercised
        j = rng.randint(1, 2 ** rng.randint(1, bits))
        k = rng.randint(1, 2 ** rng.randint(1, bits))
        j, k = min(j, hi), min(k, hi)
        if not nested_floor_check(m, j, k):
            failures += 1
            first = first or (m, j, k)
    return SweepReport(f"nested floor {count} random {bits}-bit", count, failures, first)


def verify_bracket(m_max: int) -> SweepReport:
    """Bracket value is 0/1 and equals the parity of ``m // (jk)`` for all ``j, k <= m <= m_max``."""
    checked, failures, first = _bracket_failures(m_max)
    return SweepReport(
        f"bracket parity m<={m_max}",
        int(checked),
        int(failures),
        tuple(int(v) for v in first) if failures else None,
    )

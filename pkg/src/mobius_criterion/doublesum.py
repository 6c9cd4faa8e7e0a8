"""The double sum S(n) over ``j, k <= n`` of ``bracket(n^2, j, k) mu(j) mu(k)``.

Two evaluators are kept side by side. :func:`double_sum_naive` transcribes
the definition term by term (O(n^2)) and is the permanent reference.
:func:`double_sum_blocked` rewrites the inner sum through ``m_j = n^2 // j``,
where ``bracket(n^2, j, k)`` is the parity of ``m_j // k``, and walks the
maximal runs of ``k`` on which ``m_j // k`` is constant. Odd runs add
``M(k2) - M(k1 - 1)`` from a Mertens table, even runs are skipped, giving
O(n^1.5) work overall.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np
from numba import njit, prange

from ._threads import thread_limit
from .errors import DomainError, PreconditionError
from .identities import SweepReport
from .mertens import MertensTable, differences, mertens_table
from .moebius import mobius_array

# n^2 and 2*j*k <= 2 n^2 must stay below 2**63
N_LIMIT = 3 * 10**9

Method = Literal["naive", "blocked"]


@dataclass(frozen=True)
class DoubleSumResult:
    n: int
    s: int
    method: Method
    elapsed: float = field(default=0.0, compare=False)
    # number of constant-quotient runs visited (blocked only); diagnostic
    blocks: int = field(default=0, compare=False)


def _check_n(n: int) -> int:
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > N_LIMIT:
        raise DomainError(f"n={n} exceeds {N_LIMIT}; n^2 would overflow 64-bit accumulation")
    return n


@njit(parallel=True, cache=True)
def _naive_kernel(mu, n):
    m = n * n
    total = 0
    for j in prange(1, n + 1):
        if mu[j] == 0:
            continue
        inner = 0
        for k in range(1, n + 1):
            if mu[k] == 0:
                continue
            jk = j * k
            inner += (m // jk - 2 * (m // (2 * jk))) * mu[k]
        total += mu[j] * inner
    return total


@njit(parallel=True, cache=True)
def _blocked_kernel(prefix, n):
    m = n * n
    total = 0
    blocks = 0
    for j in prange(1, n + 1):
        mu_j = prefix[j] - prefix[j - 1]
        if mu_j == 0:
            continue
        mj = m // j
        inner = 0
        visited = 0
        k = 1
        while k <= n:
            q = mj // k
            k2 = mj // q
            if k2 > n:
                k2 = n
            if q & 1:
                inner += prefix[k2] - prefix[k - 1]
            visited += 1
            k = k2 + 1
        total += mu_j * inner
        blocks += visited
    return total, blocks


def double_sum_naive(
    n: int, *, mu: np.ndarray | None = None, threads: int | None = None
) -> DoubleSumResult:
    """S(n) by direct evaluation of every pair ``(j, k)`` with nonzero ``mu``.

    Args:
        n: order of the sum, ``1 <= n <= 3e9``.
        mu: optional precomputed ``mu(0..N)`` with ``N >= n``.
        threads: worker threads for the outer loop (``None`` = default).
    """
    n = _check_n(n)
    if mu is None:
        mu = mobius_array(n)
    elif len(mu) <= n:
        raise PreconditionError(f"mu table covers up to {len(mu) - 1}, need {n}")
    start = time.perf_counter()
    with thread_limit(threads):
        s = int(_naive_kernel(mu, n))
    return DoubleSumResult(n, s, "naive", time.perf_counter() - start)


def double_sum_blocked(
    n: int, mtable: MertensTable | None = None, *, threads: int | None = None
) -> DoubleSumResult:
    """S(n) via constant-quotient blocking against a Mertens table covering ``[1, n]``.

    Raises:
        PreconditionError: ``mtable`` stops short of ``n``.
    """
    n = _check_n(n)
    if mtable is None:
        mtable = mertens_table(n)
    elif mtable.n_max < n:
        raise PreconditionError(f"Mertens table covers up to {mtable.n_max}, need {n}")
    start = time.perf_counter()
    with thread_limit(threads):
        s, blocks = _blocked_kernel(mtable.prefix, n)
    return DoubleSumResult(n, int(s), "blocked", time.perf_counter() - start, int(blocks))


def double_sum(
    n: int,
    method: Literal["naive", "blocked", "auto"] = "auto",
    *,
    threads: int | None = None,
) -> DoubleSumResult:
    """Dispatch helper: ``auto`` uses the naive sum for ``n <= 64``."""
    if method == "auto":
        method = "naive" if n <= 64 else "blocked"
    if method == "naive":
        return double_sum_naive(n, threads=threads)
    if method == "blocked":
        return double_sum_blocked(n, threads=threads)
    raise ValueError(f"unknown method {method!r}")


def main_identity_residuals(
    ns: Iterable[int],
    method: Method = "blocked",
    *,
    threads: int | None = None,
    segment_len: int | None = None,
) -> dict[int, int]:
    """``[M(n^2) - 2 M(n^2 // 2)] - [-S(n) - 2 M(n)]`` for each ``n``; all should be 0.

    ``M(n^2)`` and ``M(n^2 // 2)`` come from one streaming pass over every
    requested ``n``; ``S(n)`` and ``M(n)`` from a table up to ``max(ns)``.
    """
    ns = sorted({int(n) for n in ns})
    if not ns:
        return {}
    if ns[0] < 2:
        raise PreconditionError(
            "the identity needs n >= 2 (at n = 1 the left side is 1, the right side -3)"
        )
    for n in ns:
        _check_n(n)
    kwargs = {} if segment_len is None else {"segment_len": segment_len}
    diffs = {d.x: d.d for d in differences([n * n for n in ns], **kwargs)}
    table = mertens_table(ns[-1])
    mu = table.mobius()
    out = {}
    for n in ns:
        if method == "naive":
            s = double_sum_naive(n, mu=mu, threads=threads).s
        elif method == "blocked":
            s = double_sum_blocked(n, table, threads=threads).s
        else:
            raise ValueError(f"unknown method {method!r}")
        out[n] = diffs[n * n] - (-s - 2 * table(n))
    return out


def main_identity_residual(n: int, method: Method = "blocked", **kwargs) -> int:
    """Single-``n`` form of :func:`main_identity_residuals`; expected 0 for ``n >= 2``."""
    return main_identity_residuals([n], method, **kwargs)[int(n)]


def verify_main_identity(ns: Iterable[int], method: Method = "naive", **kwargs) -> SweepReport:
    ns = sorted({int(n) for n in ns})
    residuals = main_identity_residuals(ns, method, **kwargs)
    bad = [(n, r) for n, r in residuals.items() if r != 0]
    label = f"main identity [{method}] {len(ns)} n in [{ns[0]}, {ns[-1]}]" if ns else "main identity"
    return SweepReport(label, len(ns), len(bad), bad[0] if bad else None)


def verify_blocked_matches_naive(ns: Iterable[int], *, threads: int | None = None) -> SweepReport:
    ns = sorted({int(n) for n in ns})
    table = mertens_table(ns[-1])
    mu = table.mobius()
    bad = []
    for n in ns:
        naive = double_sum_naive(n, mu=mu, threads=threads).s
        blocked = double_sum_blocked(n, table, threads=threads).s
        if naive != blocked:
            bad.append((n, naive, blocked))
    label = f"blocked == naive {len(ns)} n in [{ns[0]}, {ns[-1]}]"
    return SweepReport(label, len(ns), len(bad), bad[0] if bad else None)

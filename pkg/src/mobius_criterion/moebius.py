"""Mobius function: single values by trial division, ranges by sieving.

Two sieves are provided. :func:`sieve_full` is a linear (smallest prime
factor) sieve over ``[1, n]``; :func:`sieve_segment` handles an arbitrary
window ``[lo, hi]`` given the primes up to ``sqrt(hi)``, which is what the
streaming Mertens pass uses to go past memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log

import numpy as np
from numba import njit

from .errors import DomainError, PreconditionError, ResourceError

U64_MAX = 2**64 - 1
DEFAULT_SEGMENT_LEN = 1 << 20
DEFAULT_MEMORY_BUDGET = 2 * 1024**3  # bytes

# int8 mu + int32 smallest-prime-factor + amortised prime list
FULL_SIEVE_BYTES_PER_ENTRY = 6


@dataclass(frozen=True, eq=False)
class MoebiusBlock:
    """Contiguous window of Mobius values; ``values[i] == mu(lo + i)``."""

    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.lo <= self.hi:
            raise PreconditionError(f"invalid block bounds [{self.lo}, {self.hi}]")
        if len(self.values) != self.hi - self.lo + 1:
            raise PreconditionError(
                f"block [{self.lo}, {self.hi}] needs {self.hi - self.lo + 1} values, "
                f"got {len(self.values)}"
            )
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def at(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside block [{self.lo}, {self.hi}]")
        return int(self.values[n - self.lo])

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)


def _check_u64(n: int, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < 1:
        raise DomainError(f"{name} must be >= 1 (mu is undefined at {n})")
    if n > U64_MAX:
        raise DomainError(f"{name}={n} exceeds the unsigned 64-bit range")
    return n


def mobius_single(n: int) -> int:
    """Return mu(n) by trial factorization."""
    n = _check_u64(n)
    sign = 1
    if n % 2 == 0:
        n //= 2
        if n % 2 == 0:
            return 0
        sign = -sign
    d = 3
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            sign = -sign
        d += 2
    if n > 1:
        sign = -sign
    return sign


def primes_up_to(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array (Eratosthenes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@njit(cache=True)
def _linear_sieve(n, prime_cap):
    mu = np.zeros(n + 1, dtype=np.int8)
    spf = np.zeros(n + 1, dtype=np.int32)
    primes = np.empty(prime_cap, dtype=np.int64)
    count = 0
    mu[1] = 1
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
            mu[i] = -1
        for t in range(count):
            p = primes[t]
            if p > spf[i] or i * p > n:
                break
            spf[i * p] = p
            if p == spf[i]:
                mu[i * p] = 0
            else:
                mu[i * p] = -mu[i]
    return mu


def _check_budget(n: int, bytes_per_entry: int, memory_budget: int | None, hint: str) -> None:
    budget = DEFAULT_MEMORY_BUDGET if memory_budget is None else memory_budget
    need = n * bytes_per_entry
    if need > budget or n >= 2**31 - 1:
        raise ResourceError(
            f"a table of {n} entries needs ~{need} bytes, over the budget of {budget}; {hint}"
        )


def mobius_array(n: int, *, memory_budget: int | None = None) -> np.ndarray:
    """``mu(0..n)`` as an int8 array with the placeholder ``mu(0) = 0``.

    Shared by the table-based modules that prefer 1-based indexing.
    """
    n = _check_u64(n)
    _check_budget(
        n,
        FULL_SIEVE_BYTES_PER_ENTRY,
        memory_budget,
        "use sieve_segment for windows beyond memory",
    )
    # pi(n) < 1.26 n / log n for n > 1
    prime_cap = int(1.26 * n / log(n)) + 16 if n > 1 else 16
    return _linear_sieve(n, prime_cap)


def sieve_full(n: int, *, memory_budget: int | None = None) -> MoebiusBlock:
    """Mobius values on ``[1, n]`` from a linear smallest-prime-factor sieve.

    Raises:
        ResourceError: the sieve would not fit in ``memory_budget`` bytes.
    """
    mu = mobius_array(n, memory_budget=memory_budget)
    return MoebiusBlock(1, int(n), mu[1:])


def _segment_values(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    # Flip sign once per prime factor p <= sqrt(hi), zero on p^2; the product of
    # the marked primes falls short of n exactly when one prime > sqrt(hi) remains.
    size = hi - lo + 1
    mu = np.ones(size, dtype=np.int8)
    prod = np.ones(size, dtype=np.int64)
    for p in primes:
        p = int(p)
        if p * p > hi:
            break
        start = (-lo) % p
        mu[start::p] *= -1
        prod[start::p] *= p
        sq = p * p
        mu[(-lo) % sq :: sq] = 0
    residual = prod != np.arange(lo, hi + 1, dtype=np.int64)
    mu[residual] *= -1
    return mu


def sieve_segment(lo: int, hi: int, primes) -> MoebiusBlock:
    """Mobius values on ``[lo, hi]``.

    Args:
        lo: first argument, ``>= 1``.
        hi: last argument, ``>= lo``.
        primes: ascending primes; must contain every prime ``<= isqrt(hi)``.

    Raises:
        PreconditionError: bad bounds or an incomplete prime list.
    """
    lo = _check_u64(lo, "lo")
    hi = _check_u64(hi, "hi")
    if lo > hi:
        raise PreconditionError(f"lo={lo} > hi={hi}")
    if hi >= 2**63:
        raise DomainError("segment sieve is limited to hi < 2**63")
    primes = np.asarray(primes, dtype=np.int64)
    needed = primes_up_to(isqrt(hi))
    if len(primes) < len(needed) or not np.array_equal(primes[: len(needed)], needed):
        largest = int(primes[-1]) if len(primes) else None
        raise PreconditionError(
            f"primes must include every prime <= {isqrt(hi)} (largest supplied: {largest})"
        )
    return MoebiusBlock(lo, hi, _segment_values(lo, hi, primes))

"""Growth-exponent scans and the Dirichlet-coefficient view of D(x).

Two scans are exposed:

* :func:`scan_double_sum` reports ``log|S(n)| / log n`` along an arithmetic
  progression of ``n``; the conjectured ceiling is 1.
* :func:`scan_difference` reports ``log|D(x)| / log x`` at chosen ``x``,
  where ``D(x) = M(x) - 2 M(x // 2)``; the conjectured ceiling is 1/2.

The two views are tied together exactly by ``S(n) = -D(n^2) - 2 M(n)``.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .doublesum import double_sum_blocked
from .errors import PreconditionError
from .mertens import CheckpointRecord, DifferenceSample, differences, mertens_table
from .moebius import DEFAULT_SEGMENT_LEN, mobius_array, mobius_single


class ScanRecord(NamedTuple):
    n: int
    magnitude: int
    exponent: float | None
    running_sup: float | None


class SeriesCoefficient(NamedTuple):
    m: int
    c: int


def growth_exponent(magnitude: int, n: int) -> float | None:
    """``log|magnitude| / log n``, or ``None`` when undefined (zero magnitude, ``n = 1``)."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if magnitude == 0 or n == 1:
        return None
    return math.log(abs(magnitude)) / math.log(n)


def _with_running_sup(pairs: Iterable[tuple[int, int]]) -> list[ScanRecord]:
    records = []
    sup = None
    for n, magnitude in pairs:
        e = growth_exponent(magnitude, n)
        if e is not None and (sup is None or e > sup):
            sup = e
        records.append(ScanRecord(n, magnitude, e, sup))
    return records


def scan_double_sum(
    n_min: int, n_max: int, stride: int = 1, *, threads: int | None = None
) -> list[ScanRecord]:
    """S(n) and its growth exponent for ``n = n_min, n_min + stride, ... <= n_max``."""
    if n_min < 2:
        raise PreconditionError(f"n_min must be >= 2, got {n_min}")
    if n_max < n_min:
        raise PreconditionError(f"n_max={n_max} < n_min={n_min}")
    if stride < 1:
        raise PreconditionError(f"stride must be >= 1, got {stride}")
    table = mertens_table(n_max)
    pairs = (
        (n, double_sum_blocked(n, table, threads=threads).s)
        for n in range(n_min, n_max + 1, stride)
    )
    return _with_running_sup(pairs)


def scan_difference(
    x_points: Iterable[int],
    *,
    checkpoints: Iterable[Sequence[int]] = (),
    segment_len: int = DEFAULT_SEGMENT_LEN,
    on_segment: Callable[[CheckpointRecord], None] | None = None,
) -> list[ScanRecord]:
    """D(x) and ``log|D(x)| / log x`` for ascending ``x_points``, one streaming pass.

    ``checkpoints`` and ``on_segment`` are forwarded to the Mertens pass, so a
    long scan can both persist and resume from ``(x, M(x))`` records.
    """
    samples = differences(
        x_points, checkpoints=checkpoints, segment_len=segment_len, on_segment=on_segment
    )
    return difference_records(samples)


def difference_records(samples: Iterable[DifferenceSample]) -> list[ScanRecord]:
    """Scan records for already computed ``D(x)`` samples, in the given order."""
    return _with_running_sup((s.x, s.d) for s in samples)


def _iroot(value: int, k: int) -> int:
    """Largest ``r`` with ``r**k <= value``."""
    if value < 2:
        return value
    r = int(round(value ** (1.0 / k)))
    while r**k > value:
        r -= 1
    while (r + 1) ** k <= value:
        r += 1
    return r


def geometric_grid(x_max: int, per_decade: int = 12, budget: int | None = None) -> list[int]:
    """Deduplicated ``floor(10 ** (i / per_decade))`` for ``i >= 0`` up to ``x_max``.

    Roots are taken in exact integer arithmetic so the grid is identical
    everywhere. ``budget`` keeps only the first ``budget`` points.
    """
    if x_max < 1:
        raise PreconditionError(f"x_max must be >= 1, got {x_max}")
    if per_decade < 1:
        raise PreconditionError("per_decade must be >= 1")
    points: list[int] = []
    i = 0
    while True:
        x = _iroot(10**i, per_decade)
        if x > x_max:
            break
        if not points or x != points[-1]:
            points.append(x)
        i += 1
    if budget is not None:
        points = points[:budget]
    return points


def series_coefficient(m: int) -> SeriesCoefficient:
    """Coefficient of ``m^-s`` in ``(1 - 2^(1-s)) * sum mu(k) k^-s``."""
    c = mobius_single(m)
    if m % 2 == 0:
        c -= 2 * mobius_single(m // 2)
    return SeriesCoefficient(m, c)


def series_coefficients(x_max: int) -> np.ndarray:
    """``c(0..x_max)`` as int64, with ``c(0) = 0``."""
    mu = mobius_array(x_max).astype(np.int64)
    c = mu.copy()
    c[2::2] -= 2 * mu[1 : x_max // 2 + 1]
    return c


def partial_sum_check(x: int) -> bool:
    """Whether the coefficients ``c(1..x)`` sum to ``D(x)``."""
    if x < 1:
        raise PreconditionError(f"x must be >= 1, got {x}")
    total = sum(series_coefficient(m).c for m in range(1, x + 1))
    return total == differences([x])[0].d


def partial_sum_mismatches(x_max: int) -> list[int]:
    """Every ``x <= x_max`` where the coefficient partial sum differs from ``D(x)``."""
    sums = np.cumsum(series_coefficients(x_max))
    prefix = mertens_table(x_max).prefix
    xs = np.arange(x_max + 1)
    d = prefix - 2 * prefix[xs // 2]
    bad = np.flatnonzero(sums[1:] != d[1:]) + 1
    return [int(x) for x in bad]

"""Mertens function M(x), the difference D(x) = M(x) - 2 M(x // 2), checkpoints.

Small ranges go through an in-memory prefix table; large ones through
:func:`mertens_many`, a single left-to-right segmented pass that answers a
whole sorted list of queries and can restart from previously saved
``(x, M(x))`` checkpoints.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import isqrt
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CheckpointFormatError, DomainError, PreconditionError
from .moebius import (
    DEFAULT_SEGMENT_LEN,
    FULL_SIEVE_BYTES_PER_ENTRY,
    U64_MAX,
    _check_budget,
    _segment_values,
    mobius_array,
    primes_up_to,
)

# int64 prefix on top of the sieve's own footprint
TABLE_BYTES_PER_ENTRY = FULL_SIEVE_BYTES_PER_ENTRY + 8


class CheckpointRecord(NamedTuple):
    x: int
    m_of_x: int


class DifferenceSample(NamedTuple):
    x: int
    m_x: int
    m_half: int
    d: int


@dataclass(frozen=True, eq=False)
class MertensTable:
    """Exact prefix sums ``prefix[i] = M(i)`` for ``0 <= i <= n_max``."""

    n_max: int
    prefix: np.ndarray

    def __post_init__(self) -> None:
        if len(self.prefix) != self.n_max + 1:
            raise PreconditionError("prefix length must be n_max + 1")
        self.prefix.setflags(write=False)

    def __call__(self, x: int) -> int:
        if not 0 <= x <= self.n_max:
            raise IndexError(f"M({x}) outside table range [0, {self.n_max}]")
        return int(self.prefix[x])

    def mobius(self) -> np.ndarray:
        """``mu(0..n_max)`` recovered from consecutive differences (``mu(0) = 0``)."""
        mu = np.zeros(self.n_max + 1, dtype=np.int8)
        mu[1:] = np.diff(self.prefix)
        return mu


def mertens_table(n: int, *, memory_budget: int | None = None) -> MertensTable:
    """Build the table of ``M(0..n)`` from a full sieve."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    _check_budget(
        n,
        TABLE_BYTES_PER_ENTRY,
        memory_budget,
        "use mertens_many to stream values beyond memory",
    )
    mu = mobius_array(n, memory_budget=memory_budget)
    prefix = np.cumsum(mu, dtype=np.int64)
    return MertensTable(int(n), prefix)


def _validate_queries(queries: Iterable[int]) -> list[int]:
    out = [int(q) for q in queries]
    for i, q in enumerate(out):
        if q < 1:
            raise PreconditionError(f"query {q} at position {i} must be >= 1")
        if q > U64_MAX:
            raise DomainError(f"query {q} exceeds the unsigned 64-bit range")
        if i and q <= out[i - 1]:
            raise PreconditionError(
                f"queries must be strictly ascending: {out[i - 1]} then {q} at position {i}"
            )
    return out


def _validate_checkpoints(records: Iterable[Sequence[int]]) -> list[CheckpointRecord]:
    out = [CheckpointRecord(int(x), int(m)) for x, m in records]
    for i, rec in enumerate(out):
        if rec.x < 0 or abs(rec.m_of_x) > rec.x:
            raise PreconditionError(f"impossible checkpoint {tuple(rec)}")
        if i and rec.x <= out[i - 1].x:
            raise PreconditionError(
                f"checkpoints must be strictly ascending in x: {out[i - 1].x} then {rec.x}"
            )
    return out


def mertens_many(
    queries: Iterable[int],
    *,
    checkpoints: Iterable[Sequence[int]] = (),
    segment_len: int = DEFAULT_SEGMENT_LEN,
    on_segment: Callable[[CheckpointRecord], None] | None = None,
) -> list[CheckpointRecord]:
    """Answer ``M(x)`` for every query in one streaming segmented pass.

    Before sieving toward the next unanswered query the pass jumps to the
    largest checkpoint at or below it, so a scan can be resumed from any
    earlier run's saved records.

    Args:
        queries: strictly ascending integers ``>= 1``.
        checkpoints: trusted ``(x, M(x))`` pairs, strictly ascending in ``x``.
        segment_len: entries sieved per segment.
        on_segment: called with ``(x, M(x))`` at the end of every segment;
            the natural hook for persisting checkpoints mid-run.

    Raises:
        PreconditionError: unsorted, repeated or zero queries.
    """
    qs = _validate_queries(queries)
    ckpts = _validate_checkpoints(checkpoints)
    if segment_len < 1:
        raise PreconditionError("segment_len must be >= 1")
    if not qs:
        return []
    if qs[-1] >= 2**63:
        raise DomainError("streaming pass is limited to x < 2**63")

    q_arr = np.asarray(qs, dtype=np.int64)
    primes = primes_up_to(isqrt(qs[-1]))
    ckpts = [c for c in ckpts if c.x <= qs[-1]]
    ck_x = np.asarray([c.x for c in ckpts], dtype=np.int64)
    results: list[CheckpointRecord] = []
    pos, acc = 0, 0
    qi = 0
    while qi < len(qs):
        target = qs[qi]
        ci = int(np.searchsorted(ck_x, target, side="right")) - 1
        if ci >= 0 and ck_x[ci] > pos:
            pos, acc = ckpts[ci]
        if pos == target:
            results.append(CheckpointRecord(target, acc))
            qi += 1
            continue
        hi = min(pos + segment_len, qs[-1])
        lo = pos + 1
        csum = np.cumsum(_segment_values(lo, hi, primes), dtype=np.int64)
        qj = int(np.searchsorted(q_arr, hi, side="right"))
        if qj > qi:
            found = acc + csum[q_arr[qi:qj] - lo]
            results.extend(CheckpointRecord(q, int(m)) for q, m in zip(qs[qi:qj], found))
            qi = qj
        pos, acc = hi, acc + int(csum[-1])
        if on_segment is not None:
            on_segment(CheckpointRecord(pos, acc))
    return results


def mertens(x: int, **kwargs) -> int:
    """Single ``M(x)``; ``M(0) = 0``."""
    if x == 0:
        return 0
    return mertens_many([x], **kwargs)[0].m_of_x


def differences(xs: Iterable[int], **kwargs) -> list[DifferenceSample]:
    """``D(x)`` for ascending ``xs`` in one pass, half-points folded into the query list."""
    xs = _validate_queries(xs)
    wanted = sorted(set(xs) | {x // 2 for x in xs if x >= 2})
    values = {0: 0}
    values.update(mertens_many(wanted, **kwargs))
    out = []
    for x in xs:
        m_x, m_half = values[x], values[x // 2]
        out.append(DifferenceSample(x, m_x, m_half, m_x - 2 * m_half))
    return out


def difference(x: int, **kwargs) -> DifferenceSample:
    """``(x, M(x), M(x // 2), M(x) - 2 M(x // 2))``."""
    if x < 1:
        raise DomainError(f"D(x) requires x >= 1, got {x}")
    return differences([x], **kwargs)[0]


# -- checkpoint files: "x<TAB>M(x)\n", ascending, no header -------------------


def format_checkpoints(records: Iterable[Sequence[int]]) -> str:
    recs = _validate_checkpoints(records)
    return "".join(f"{r.x}\t{r.m_of_x}\n" for r in recs)


def parse_checkpoints(text: str) -> list[CheckpointRecord]:
    records: list[CheckpointRecord] = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        fields = line.split("\t")
        if len(fields) != 2:
            raise CheckpointFormatError(lineno, line, "expected exactly two tab-separated fields")
        x_txt, m_txt = fields
        if not x_txt.isdigit() or not x_txt.isascii():
            raise CheckpointFormatError(lineno, line, "x is not an unsigned decimal")
        m_body = m_txt[1:] if m_txt.startswith("-") else m_txt
        if not m_body.isdigit() or not m_body.isascii():
            raise CheckpointFormatError(lineno, line, "M(x) is not a signed decimal")
        rec = CheckpointRecord(int(x_txt), int(m_txt))
        if rec.x > U64_MAX or abs(rec.m_of_x) > rec.x:
            raise CheckpointFormatError(lineno, line, "value out of range")
        if records and rec.x <= records[-1].x:
            raise PreconditionError(
                f"line {lineno}: x={rec.x} does not ascend past {records[-1].x}"
            )
        records.append(rec)
    return records


def checkpoint_write(records: Iterable[Sequence[int]], path: str | os.PathLike) -> None:
    """Write records atomically (temp file + rename) so a crash never truncates them."""
    text = format_checkpoints(records)
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def checkpoint_read(path: str | os.PathLike) -> list[CheckpointRecord]:
    with open(path, encoding="ascii", newline="") as fh:
        return parse_checkpoints(fh.read())


def merge_checkpoints(*groups: Iterable[Sequence[int]]) -> list[CheckpointRecord]:
    """Union of checkpoint lists; conflicting values for the same x are an error."""
    merged: dict[int, int] = {}
    for group in groups:
        for x, m in group:
            x, m = int(x), int(m)
            if merged.setdefault(x, m) != m:
                raise PreconditionError(f"conflicting checkpoints for x={x}: {merged[x]} vs {m}")
    return [CheckpointRecord(x, merged[x]) for x in sorted(merged)]

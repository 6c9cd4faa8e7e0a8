"""Command-line front end.

Subcommands::

    verify     identity sweeps, pass/fail table, nonzero exit on any failure
    mertens    M(x) at given points
    doublesum  S(n) by the naive or blocked method (--check runs both)
    scan-s     growth exponents of S(n) over n_min..n_max
    scan-d     growth exponents of D(x) over a geometric grid or explicit points
    resume     continue a scan-d run from its checkpoint file
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from ._threads import THREADS_ENV
from .criterion import (
    difference_records,
    geometric_grid,
    partial_sum_mismatches,
    scan_double_sum,
)
from .doublesum import (
    double_sum,
    verify_blocked_matches_naive,
    verify_main_identity,
)
from .errors import CheckpointFormatError, MobiusCriterionError, ResourceError
from .identities import (
    SweepReport,
    verify_bracket,
    verify_lemmas,
    verify_lemmas_random,
    verify_meissel,
    verify_nested_floor,
    verify_nested_floor_random,
)
from .mertens import (
    CheckpointRecord,
    checkpoint_read,
    checkpoint_write,
    differences,
    merge_checkpoints,
    mertens_many,
)
from .moebius import DEFAULT_SEGMENT_LEN
from .output import emit

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_RESOURCE = 4

SUBCOMMANDS = ("verify", "mertens", "doublesum", "scan-s", "scan-d", "resume")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    stride: int = 1
    points: list[int] | None = None
    x_max: int | None = None
    per_decade: int = 12
    budget: int | None = None
    method: str = "auto"
    check: bool = False
    # None: text table for verify, csv elsewhere
    output_format: str | None = None
    output_path: Path | None = None
    checkpoint_path: Path | None = None
    segment_len: int = DEFAULT_SEGMENT_LEN
    threads: int | None = None
    progress: bool = False
    # verify-only knobs
    m_max: int = 400
    meissel_max: int = 10**5
    nested_max: int | None = None
    bracket_max: int | None = None
    random_cases: int = 1000
    random_m_max: int = 10**4
    identity_n_max: int = 200
    partial_max: int = 10**5
    seed: int = 0

    @property
    def fmt(self) -> str:
        return self.output_format or "csv"

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.n_min is not None and self.n_max is not None and self.n_min > self.n_max:
            raise UsageError(f"--n-min {self.n_min} exceeds --n-max {self.n_max}")
        if self.stride < 1:
            raise UsageError("--stride must be >= 1")
        if self.segment_len < 1:
            raise UsageError("--segment-len must be >= 1")
        if self.threads is not None and self.threads < 1:
            raise UsageError("--threads must be >= 1 or 'auto'")
        if self.check and self.method not in ("auto",):
            raise UsageError("--check runs both methods; do not combine it with --method")
        if self.subcommand in ("scan-d", "resume") and self.points and self.x_max:
            raise UsageError("give either --points or --x-max, not both")
        if self.subcommand == "resume" and self.checkpoint_path is None:
            raise UsageError("resume needs --checkpoint")
        if self.subcommand == "doublesum" and self.n is None:
            raise UsageError("doublesum needs --n")
        if self.subcommand == "mertens" and not self.points:
            raise UsageError("mertens needs --points")
        if self.subcommand == "scan-s" and (self.n_min is None or self.n_max is None):
            raise UsageError("scan-s needs --n-min and --n-max")


def _threads_arg(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")


def _int_arg(text: str) -> int:
    # accept 1e8-style shorthand for exact powers of ten
    try:
        return int(text)
    except ValueError:
        pass
    try:
        mant, exp = text.lower().split("e")
        return int(mant) * 10 ** int(exp)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default=None)
    common.add_argument("--output", dest="output_path", type=Path, default=None)
    common.add_argument("--threads", type=_threads_arg, default=None,
                        help=f"worker threads or 'auto' (env {THREADS_ENV})")
    common.add_argument("--segment-len", type=_int_arg, default=DEFAULT_SEGMENT_LEN)

    parser = argparse.ArgumentParser(prog="mobius-criterion", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("verify", parents=[common], help="run identity sweeps")
    p.add_argument("--m-max", type=_int_arg, default=400)
    p.add_argument("--meissel-max", type=_int_arg, default=10**5)
    p.add_argument("--nested-max", type=_int_arg, default=None)
    p.add_argument("--bracket-max", type=_int_arg, default=None)
    p.add_argument("--random-cases", type=_int_arg, default=1000)
    p.add_argument("--random-m-max", type=_int_arg, default=10**4)
    p.add_argument("--identity-n-max", type=_int_arg, default=200)
    p.add_argument("--partial-max", type=_int_arg, default=10**5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("mertens", parents=[common], help="M(x) at given points")
    p.add_argument("--points", type=_int_arg, nargs="+", required=True)
    p.add_argument("--checkpoint", dest="checkpoint_path", type=Path, default=None,
                   help="resume from this checkpoint file if it exists")

    p = sub.add_parser("doublesum", parents=[common], help="evaluate S(n)")
    p.add_argument("--n", type=_int_arg, required=True)
    p.add_argument("--method", choices=("naive", "blocked", "auto"), default="auto")
    p.add_argument("--check", action="store_true", help="run both methods and compare")

    p = sub.add_parser("scan-s", parents=[common], help="growth exponents of S(n)")
    p.add_argument("--n-min", type=_int_arg, required=True)
    p.add_argument("--n-max", type=_int_arg, required=True)
    p.add_argument("--stride", type=_int_arg, default=1)

    for name, help_text in (("scan-d", "growth exponents of D(x)"),
                            ("resume", "continue scan-d from a checkpoint")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--x-max", type=_int_arg, default=None)
        p.add_argument("--points", type=_int_arg, nargs="+", default=None)
        p.add_argument("--per-decade", type=_int_arg, default=12)
        p.add_argument("--budget", type=_int_arg, default=None)
        p.add_argument("--checkpoint", dest="checkpoint_path", type=Path,
                       default=None, required=(name == "resume"))
        p.add_argument("--progress", action="store_true", help="rate line on stderr")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**values)


# -- subcommand bodies -----------------------------------------------------------


def _write(config: RunConfig, text: str) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(config.output_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _verify_reports(config: RunConfig) -> list[SweepReport]:
    m_max = config.m_max
    nested = config.nested_max if config.nested_max is not None else min(m_max, 500)
    bracket_max = config.bracket_max if config.bracket_max is not None else m_max
    rng = random.Random(config.seed)
    n_hi = max(config.identity_n_max, 2)
    reports = [verify_meissel(config.meissel_max)]
    reports.extend(verify_lemmas(m_max))
    reports.extend(
        verify_lemmas_random(config.random_cases, config.random_m_max, seed=config.seed)
    )
    reports.append(verify_nested_floor(nested))
    reports.append(verify_nested_floor_random(10**4, seed=config.seed))
    reports.append(verify_bracket(bracket_max))
    reports.append(verify_main_identity(range(2, n_hi + 1), "naive", threads=config.threads))
    sample = sorted(rng.sample(range(2, 10 * n_hi + 1), min(20, 10 * n_hi - 1)))
    reports.append(verify_main_identity(sample, "blocked", threads=config.threads))
    reports.append(verify_blocked_matches_naive(range(1, n_hi + 1), threads=config.threads))
    bad = partial_sum_mismatches(config.partial_max)
    reports.append(
        SweepReport(f"dirichlet partial sums x<={config.partial_max}",
                    config.partial_max, len(bad), (bad[0],) if bad else None)
    )
    return reports


def _format_table(reports: list[SweepReport]) -> str:
    width = max(len(r.name) for r in reports)
    lines = [f"{'suite':<{width}}  {'checked':>11}  {'failures':>8}  status  first counterexample"]
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        first = "" if r.first_failure is None else str(r.first_failure)
        lines.append(f"{r.name:<{width}}  {r.checked:>11}  {r.failures:>8}  {status:<6}  {first}")
    return "\n".join(lines) + "\n"


def _run_verify(config: RunConfig) -> int:
    reports = _verify_reports(config)
    if config.output_format is not None:
        rows = [
            {"suite": r.name, "checked": r.checked, "failures": r.failures,
             "status": "PASS" if r.passed else "FAIL",
             "first_counterexample": None if r.first_failure is None else str(r.first_failure)}
            for r in reports
        ]
        _write(config, _emit_dicts(rows, config.fmt))
    else:
        _write(config, _format_table(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def _emit_dicts(rows: list[dict], fmt: str) -> str:
    from collections import namedtuple

    Row = namedtuple("Row", list(rows[0]))
    return emit([Row(**r) for r in rows], fmt)


def _load_checkpoints(path: Path | None, must_exist: bool) -> list[CheckpointRecord]:
    if path is None:
        return []
    if not path.exists():
        if must_exist:
            raise FileNotFoundError(f"checkpoint file {path} does not exist")
        return []
    return checkpoint_read(path)


def _run_mertens(config: RunConfig) -> int:
    points = sorted(set(config.points))
    ckpts = _load_checkpoints(config.checkpoint_path, must_exist=False)
    records = mertens_many(points, checkpoints=ckpts, segment_len=config.segment_len)
    _write(config, emit(records, config.fmt, CheckpointRecord._fields))
    return EXIT_OK


def _run_doublesum(config: RunConfig) -> int:
    if config.check:
        results = [double_sum(config.n, m, threads=config.threads) for m in ("naive", "blocked")]
    else:
        results = [double_sum(config.n, config.method, threads=config.threads)]
    _write(config, emit(results, config.fmt, ("n", "s", "method", "elapsed")))
    if config.check and results[0].s != results[1].s:
        print(f"doublesum --check: naive {results[0].s} != blocked {results[1].s}",
              file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _run_scan_s(config: RunConfig) -> int:
    records = scan_double_sum(config.n_min, config.n_max, config.stride, threads=config.threads)
    _write(config, emit(records, config.fmt))
    return EXIT_OK


class _CheckpointSink:
    """Collects ``(x, M(x))`` records during a pass and persists them periodically."""

    def __init__(self, path: Path | None, existing: list[CheckpointRecord],
                 progress: bool, every: float = 5.0) -> None:
        self.path = path
        self.records = {r.x: r.m_of_x for r in existing}
        self.progress = progress
        self.every = every
        self.last_save = self.last_tick = time.monotonic()
        self.last_x: int | None = None

    def __call__(self, rec: CheckpointRecord) -> None:
        self.records[rec.x] = rec.m_of_x
        now = time.monotonic()
        if self.progress:
            line = f"x={rec.x} M(x)={rec.m_of_x}"
            if self.last_x is not None and rec.x > self.last_x:
                rate = (rec.x - self.last_x) / max(now - self.last_tick, 1e-9)
                line += f" rate={rate:.3e}/s"
            print(line, file=sys.stderr)
        self.last_x, self.last_tick = rec.x, now
        if self.path is not None and now - self.last_save >= self.every:
            self.save()

    def save(self) -> None:
        if self.path is None:
            return
        checkpoint_write(merge_checkpoints(self.records.items()), self.path)
        self.last_save = time.monotonic()


def _run_scan_d(config: RunConfig) -> int:
    resuming = config.subcommand == "resume"
    ckpts = _load_checkpoints(config.checkpoint_path, must_exist=resuming)
    if config.points:
        points = sorted(set(config.points))
    else:
        if config.x_max is None:
            if not resuming or not ckpts:
                raise UsageError(f"{config.subcommand} needs --x-max or --points")
            x_max = ckpts[-1].x
        else:
            x_max = config.x_max
        points = geometric_grid(x_max, config.per_decade, config.budget)
    sink = _CheckpointSink(config.checkpoint_path, ckpts, config.progress)
    samples = differences(
        points, checkpoints=ckpts, segment_len=config.segment_len, on_segment=sink
    )
    for smp in samples:
        sink.records[smp.x] = smp.m_x
        if smp.x >= 2:
            sink.records[smp.x // 2] = smp.m_half
    sink.save()
    _write(config, emit(difference_records(samples), config.fmt))
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Dispatch a validated config; returns the process exit status."""
    config.validate()
    handlers = {
        "verify": _run_verify,
        "mertens": _run_mertens,
        "doublesum": _run_doublesum,
        "scan-s": _run_scan_s,
        "scan-d": _run_scan_d,
        "resume": _run_scan_d,
    }
    return handlers[config.subcommand](config)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_config(argv)
        return run(config)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CheckpointFormatError as exc:
        print(f"checkpoint error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except MobiusCriterionError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

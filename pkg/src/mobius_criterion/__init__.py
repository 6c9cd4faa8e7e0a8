"""Mobius/Mertens identities, blocked double sums and growth-exponent scans."""

__version__ = "0.1.0"

from .criterion import (
    ScanRecord,
    SeriesCoefficient,
    geometric_grid,
    growth_exponent,
    partial_sum_check,
    scan_difference,
    scan_double_sum,
    series_coefficient,
)
from .doublesum import (
    DoubleSumResult,
    double_sum_blocked,
    double_sum_naive,
    main_identity_residual,
)
from .errors import (
    CheckpointFormatError,
    DomainError,
    MobiusCriterionError,
    PreconditionError,
    ResourceError,
)
from .identities import (
    BracketTerm,
    bracket,
    lemma3_sum,
    lemma4_sum,
    meissel_sum,
    nested_floor_check,
)
from .mertens import (
    CheckpointRecord,
    DifferenceSample,
    MertensTable,
    checkpoint_read,
    checkpoint_write,
    difference,
    mertens_many,
    mertens_table,
)
from .moebius import MoebiusBlock, mobius_single, sieve_full, sieve_segment

__all__ = [
    "BracketTerm",
    "CheckpointFormatError",
    "CheckpointRecord",
    "DifferenceSample",
    "DomainError",
    "DoubleSumResult",
    "MertensTable",
    "MobiusCriterionError",
    "MoebiusBlock",
    "PreconditionError",
    "ResourceError",
    "ScanRecord",
    "SeriesCoefficient",
    "bracket",
    "checkpoint_read",
    "checkpoint_write",
    "difference",
    "double_sum_blocked",
    "double_sum_naive",
    "geometric_grid",
    "growth_exponent",
    "lemma3_sum",
    "lemma4_sum",
    "main_identity_residual",
    "meissel_sum",
    "mertens_many",
    "mertens_table",
    "mobius_single",
    "nested_floor_check",
    "partial_sum_check",
    "scan_difference",
    "scan_double_sum",
    "series_coefficient",
    "sieve_full",
    "sieve_segment",
]

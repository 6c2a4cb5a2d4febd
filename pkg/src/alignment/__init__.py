"""Abstention-aware alignment core."""

from src.alignment.ops import (
    AlignmentResult,
    AlignOp,
    Delete,
    InsertWord,
    Match,
    PhAbsorb,
    PhInsert,
    Substitute,
    WerCounts,
    trace_cost,
    wer_counts_from_trace,
)
from src.alignment.sequences import (
    WordSeq,
    check_alpha,
    count_placeholders,
    normalize_hypothesis,
    validate_hypothesis,
    validate_reference,
)
from src.alignment.weighted import (
    wer_align,
    weighted_edit_distance,
    weighted_edit_distance_fast,
)

__all__ = [
    "AlignmentResult",
    "AlignOp",
    "Delete",
    "InsertWord",
    "Match",
    "PhAbsorb",
    "PhInsert",
    "Substitute",
    "WerCounts",
    "WordSeq",
    "check_alpha",
    "count_placeholders",
    "normalize_hypothesis",
    "trace_cost",
    "validate_hypothesis",
    "validate_reference",
    "wer_align",
    "wer_counts_from_trace",
    "weighted_edit_distance",
    "weighted_edit_distance_fast",
]

"""Alignment operations, alignment results and WER counts."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True, slots=True)
class Match:
    ref_idx: int
    hyp_idx: int

    name = "match"
    unit_cost = 0
    ph_units = 0

    def cost(self, alpha: float) -> float:
        return 0.0


@dataclass(frozen=True, slots=True)
class Substitute:
    ref_idx: int
    hyp_idx: int

    name = "substitute"
    unit_cost = 1
    ph_units = 0

    def cost(self, alpha: float) -> float:
        return 1.0


@dataclass(frozen=True, slots=True)
class Delete:
    ref_idx: int

    name = "delete"
    unit_cost = 1
    ph_units = 0

    def cost(self, alpha: float) -> float:
        return 1.0


@dataclass(frozen=True, slots=True)
class InsertWord:
    hyp_idx: int

    name = "insert"
    unit_cost = 1
    ph_units = 0

    def cost(self, alpha: float) -> float:
        return 1.0


@dataclass(frozen=True, slots=True)
class PhAbsorb:
    """A placeholder covering ref[ref_start:ref_end), at alpha per word."""

    ref_start: int
    ref_end: int
    hyp_idx: int

    name = "ph_absorb"
    unit_cost = 0

    def __post_init__(self) -> None:
        if self.ref_end <= self.ref_start:
            raise ValueError("PhAbsorb must span at least one reference word")

    @property
    def ph_units(self) -> int:
        return self.ref_end - self.ref_start

    def cost(self, alpha: float) -> float:
        return alpha * (self.ref_end - self.ref_start)


@dataclass(frozen=True, slots=True)
class PhInsert:
    """A placeholder aligned to no reference word."""

    hyp_idx: int

    name = "ph_insert"
    unit_cost = 0
    ph_units = 1

    def cost(self, alpha: float) -> float:
        return alpha


AlignOp = Union[Match, Substitute, Delete, InsertWord, PhAbsorb, PhInsert]


def trace_cost(trace: tuple[AlignOp, ...], alpha: float) -> float:
    """Sum of op costs, accumulated as units + alpha * ph-units."""
    units = sum(op.unit_cost for op in trace)
    ph_units = sum(op.ph_units for op in trace)
    return units + alpha * ph_units


@dataclass(frozen=True)
class AlignmentResult:
    """Minimum weighted cost g, match count C and the trace producing them."""

    cost: float
    matches: int
    trace: tuple[AlignOp, ...]
    alpha: float
    unit_errors: int = 0
    ph_units: int = 0


@dataclass(frozen=True)
class WerCounts:
    substitutions: int
    deletions: int
    insertions: int
    hits: int
    n_ref: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer(self) -> float:
        return self.errors / self.n_ref


def wer_counts_from_trace(
    trace: tuple[AlignOp, ...], n_ref: int
) -> Optional[WerCounts]:
    """Tally S/D/I/hits from a placeholder-free trace; None if it holds PH ops."""
    counts = Counter(op.name for op in trace)
    if counts["ph_absorb"] or counts["ph_insert"]:
        return None
    return WerCounts(
        substitutions=counts["substitute"],
        deletions=counts["delete"],
        insertions=counts["insert"],
        hits=counts["match"],
        n_ref=n_ref,
    )

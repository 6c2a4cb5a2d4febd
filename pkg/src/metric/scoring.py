"""Reliability-Aware Score per utterance and over a corpus.

RAS = Usefulness - Cost, with Usefulness = C / N and Cost = g / N, where C
and g come from the abstention-aware alignment of the hypothesis against
the reference. Corpus results are reported both pooled (micro: sums of C,
g and N) and as the unweighted mean of per-utterance values (macro).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from src.alignment import (
    count_placeholders,
    wer_counts_from_trace,
    weighted_edit_distance,
    weighted_edit_distance_fast,
)
from src.alignment.ops import AlignmentResult
from src.config import DEFAULT_ALPHA
from src.errors import EmptyCorpusError, RasError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Data structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RasScore:
    """Per-utterance score and the components it was built from."""
    ras: float
    usefulness: float
    cost: float
    wer: Optional[float]    # None when the hypothesis holds placeholders
    n_ref: int
    matches: int
    edit_cost: float        # g, before dividing by N
    ph_count: int = 0       # merged placeholder runs in the hypothesis


@dataclass(frozen=True)
class Aggregate:
    ras: float
    usefulness: float
    cost: float


@dataclass(frozen=True)
class RowFailure:
    id: str
    error: str


@dataclass
class CorpusSummary:
    micro: Aggregate
    macro: Aggregate
    count: int
    total_matches: int
    total_edit_cost: float
    total_ref_words: int
    wer: Optional[float] = None     # pooled WER, only if no scored row has PH
    failures: list[RowFailure] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def score_alignment(alignment: AlignmentResult, n_ref: int, ph_count: int = 0) -> RasScore:
    """Turn an alignment into a RasScore."""
    counts = wer_counts_from_trace(alignment.trace, n_ref) if ph_count == 0 else None
    usefulness = alignment.matches / n_ref
    cost = alignment.cost / n_ref
    return RasScore(
        ras=usefulness - cost,
        usefulness=usefulness,
        cost=cost,
        wer=counts.wer if counts is not None else None,
        n_ref=n_ref,
        matches=alignment.matches,
        edit_cost=alignment.cost,
        ph_count=ph_count,
    )


def score_utterance(
    ref: Sequence[str],
    hyp: Sequence[str],
    alpha: float = DEFAULT_ALPHA,
    record_id: Optional[str] = None,
    fast: bool = True,
) -> RasScore:
    """Score one hypothesis against its reference.

    Placeholder runs in hyp are merged before alignment. When hyp has no
    placeholder the alignment is the standard WER alignment, so the wer
    field is read off the same trace.
    """
    align = weighted_edit_distance_fast if fast else weighted_edit_distance
    result = align(ref, hyp, alpha, record_id)
    return score_alignment(result, len(ref), count_placeholders(hyp))


def summarize(scores: Sequence[RasScore], failures: Sequence[RowFailure] = ()) -> CorpusSummary:
    """Pool per-utterance scores into micro and macro aggregates."""
    if not scores:
        raise EmptyCorpusError("no utterance could be scored")
    total_n = sum(s.n_ref for s in scores)
    total_c = sum(s.matches for s in scores)
    total_g = math.fsum(s.edit_cost for s in scores)
    k = len(scores)

    micro_u = total_c / total_n
    micro_c = total_g / total_n
    macro = Aggregate(
        ras=math.fsum(s.ras for s in scores) / k,
        usefulness=math.fsum(s.usefulness for s in scores) / k,
        cost=math.fsum(s.cost for s in scores) / k,
    )

    pooled_wer = None
    if all(s.wer is not None for s in scores):
        pooled_wer = math.fsum(s.wer * s.n_ref for s in scores) / total_n

    return CorpusSummary(
        micro=Aggregate(ras=micro_u - micro_c, usefulness=micro_u, cost=micro_c),
        macro=macro,
        count=k,
        total_matches=total_c,
        total_edit_cost=total_g,
        total_ref_words=total_n,
        wer=pooled_wer,
        failures=list(failures),
    )


def score_corpus(
    pairs: Sequence[tuple[Sequence[str], Sequence[str]]],
    alpha: float = DEFAULT_ALPHA,
    ids: Optional[Sequence[str]] = None,
) -> CorpusSummary:
    """Score (ref, hyp) pairs; failing rows are collected, not raised.

    Raises EmptyCorpusError when pairs is empty or no row scores.
    """
    if not pairs:
        raise EmptyCorpusError("corpus is empty")
    if ids is None:
        ids = [str(i) for i in range(len(pairs))]

    scores: list[RasScore] = []
    failures: list[RowFailure] = []
    for row_id, (ref, hyp) in zip(ids, pairs):
        try:
            scores.append(score_utterance(ref, hyp, alpha, record_id=row_id))
        except RasError as e:
            logger.warning("Skipping row %s: %s", row_id, e)
            failures.append(RowFailure(id=row_id, error=str(e)))

    return summarize(scores, failures)

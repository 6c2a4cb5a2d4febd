"""Abstention-aware weighted edit distance and standard WER alignment."""

from typing import Optional, Sequence

import numpy as np

from src.alignment import kernel
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
    wer_counts_from_trace,
)
from src.alignment.sequences import (
    check_alpha,
    normalize_hypothesis,
    validate_hypothesis,
    validate_reference,
)
from src.config import COST_TOLERANCE, DEFAULT_ALPHA, PH_TOKEN
from src.errors import PlaceholderInPlainAlignmentError


def _walk(choice: list[list[int]], span: list[list[int]], n: int, m: int) -> tuple[AlignOp, ...]:
    """Follow stored choices from (0, 0) to (n, m)."""
    ops: list[AlignOp] = []
    i = j = 0
    while i < n or j < m:
        c = choice[i][j]
        if c == kernel.MATCH:
            ops.append(Match(i, j))
            i += 1
            j += 1
        elif c == kernel.SUBSTITUTE:
            ops.append(Substitute(i, j))
            i += 1
            j += 1
        elif c == kernel.DELETE:
            ops.append(Delete(i))
            i += 1
        elif c == kernel.INSERT:
            ops.append(InsertWord(j))
            j += 1
        elif c == kernel.ABSORB:
            k = span[i][j]
            ops.append(PhAbsorb(i, k, j))
            i = k
            j += 1
        elif c == kernel.PH_INSERT:
            ops.append(PhInsert(j))
            j += 1
        else:
            raise RuntimeError(f"alignment table has no choice at ({i}, {j})")
    return tuple(ops)


def _result(units, phs, hits, choice, span, n: int, m: int, alpha: float) -> AlignmentResult:
    u, q = int(units[0][0]), int(phs[0][0])
    return AlignmentResult(
        cost=u + alpha * q,
        matches=int(hits[0][0]),
        trace=_walk(choice, span, n, m),
        alpha=alpha,
        unit_errors=u,
        ph_units=q,
    )


def _prepare(
    ref: Sequence[str], hyp: Sequence[str], alpha: float, record_id: Optional[str]
) -> tuple[tuple[str, ...], tuple[str, ...], float]:
    ref = validate_reference(ref, record_id)
    hyp = normalize_hypothesis(validate_hypothesis(hyp, record_id))
    return ref, hyp, check_alpha(alpha)


def weighted_edit_distance(
    ref: Sequence[str],
    hyp: Sequence[str],
    alpha: float = DEFAULT_ALPHA,
    record_id: Optional[str] = None,
) -> AlignmentResult:
    """Minimum abstention-aware edit distance with full trace, O(N^2 M).

    The hypothesis is merge-normalized first; trace hyp indices refer to the
    normalized sequence. Among minimum-cost alignments the trace has the
    most matches.
    """
    ref, hyp, alpha = _prepare(ref, hyp, alpha, record_id)
    tables = kernel.fill_quadratic(ref, hyp, alpha, COST_TOLERANCE, PH_TOKEN)
    return _result(*tables, len(ref), len(hyp), alpha)


def _encode(ref: tuple[str, ...], hyp: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    vocab: dict[str, int] = {}
    ref_ids = np.array([vocab.setdefault(w, len(vocab)) for w in ref], dtype=np.int64)
    hyp_ids = np.array(
        [kernel.PH_ID if w == PH_TOKEN else vocab.setdefault(w, len(vocab)) for w in hyp],
        dtype=np.int64,
    )
    return ref_ids, hyp_ids


def weighted_edit_distance_fast(
    ref: Sequence[str],
    hyp: Sequence[str],
    alpha: float = DEFAULT_ALPHA,
    record_id: Optional[str] = None,
) -> AlignmentResult:
    """Same result as weighted_edit_distance, in O(N M) compiled code."""
    ref, hyp, alpha = _prepare(ref, hyp, alpha, record_id)
    ref_ids, hyp_ids = _encode(ref, hyp)
    units, phs, hits, choice, span = kernel.fill_linear(ref_ids, hyp_ids, alpha, COST_TOLERANCE)
    return _result(units, phs, hits, choice.tolist(), span.tolist(), len(ref), len(hyp), alpha)


def wer_align(
    ref: Sequence[str],
    hyp: Sequence[str],
    record_id: Optional[str] = None,
) -> tuple[WerCounts, tuple[AlignOp, ...]]:
    """Unit-cost Levenshtein alignment of two placeholder-free sequences.

    Co-optimal alignments are resolved towards more hits, then towards the
    alignment that reads first as substitute, then delete, then insert.
    """
    if PH_TOKEN in ref or PH_TOKEN in hyp:
        raise PlaceholderInPlainAlignmentError(
            "standard WER alignment does not accept placeholders", record_id=record_id
        )
    result = weighted_edit_distance_fast(ref, hyp, DEFAULT_ALPHA, record_id)
    counts = wer_counts_from_trace(result.trace, len(ref))
    return counts, result.trace

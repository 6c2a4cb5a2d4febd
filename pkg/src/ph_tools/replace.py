"""Placeholder replacement: ground-truth guided and confidence-bar driven."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Optional, Sequence

from src.alignment import (
    Delete,
    Match,
    WordSeq,
    normalize_hypothesis,
    wer_align,
)
from src.config import PH_TOKEN
from src.errors import BarOutOfRangeError, ConfidenceLengthMismatchError, InvalidTokenError
from src.ph_tools.counts import TokenCountFn, word_count


def gt_guided_replace(
    ref: Sequence[str],
    hyp: Sequence[str],
    counts: TokenCountFn = word_count,
    record_id: Optional[str] = None,
) -> WordSeq:
    """Replace the erroneous segments of hyp with placeholders.

    Runs of same-type edits in the WER alignment form one segment.
    Substituted and inserted segments are sized by counts() of the
    hypothesis words, deleted segments by counts() of the missing
    reference words. The result keeps every emitted placeholder (no merge).
    """
    _, trace = wer_align(ref, hyp, record_id=record_id)
    out: list[str] = []
    for kind, group in groupby(trace, key=type):
        ops = list(group)
        if kind is Match:
            out.extend(hyp[op.hyp_idx] for op in ops)
            continue
        if kind is Delete:
            segment = " ".join(ref[op.ref_idx] for op in ops)
        else:
            segment = " ".join(hyp[op.hyp_idx] for op in ops)
        n = counts(segment)
        if n < 1:
            raise ValueError(f"token count for {segment!r} must be >= 1, got {n}")
        out.extend([PH_TOKEN] * n)
    return tuple(out)


# ---------------------------------------------------------------------------
# Confidence-bar replacement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConfidentWord:
    word: str
    confidence: float

    def __post_init__(self) -> None:
        if not self.word or any(c.isspace() for c in self.word):
            raise InvalidTokenError(f"invalid word {self.word!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class ConfidentHyp:
    words: tuple[ConfidentWord, ...]

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[str, float]]) -> "ConfidentHyp":
        return cls(tuple(ConfidentWord(w, c) for w, c in pairs))

    @classmethod
    def from_words(
        cls,
        words: Sequence[str],
        confidences: Sequence[float],
        record_id: Optional[str] = None,
    ) -> "ConfidentHyp":
        if len(words) != len(confidences):
            raise ConfidenceLengthMismatchError(
                f"{len(confidences)} confidences for {len(words)} words", record_id=record_id
            )
        return cls.from_pairs(list(zip(words, confidences)))

    def __len__(self) -> int:
        return len(self.words)


def check_bar(bar: float) -> float:
    if not 0.0 <= bar <= 1.0:
        raise BarOutOfRangeError(f"bar must lie in [0, 1], got {bar}")
    return float(bar)


def mask_report(hyp: ConfidentHyp, bar: float) -> tuple[int, ...]:
    """Positions of the words that fall strictly below the bar."""
    bar = check_bar(bar)
    return tuple(i for i, w in enumerate(hyp.words) if w.confidence < bar)


def logit_replace(hyp: ConfidentHyp, bar: float) -> WordSeq:
    """Mask every word with confidence < bar, then merge placeholder runs."""
    masked = set(mask_report(hyp, bar))
    words = [PH_TOKEN if i in masked else w.word for i, w in enumerate(hyp.words)]
    return normalize_hypothesis(words)

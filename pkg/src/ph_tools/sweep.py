"""Confidence-bar sweep: pick the bar that maximizes corpus micro RAS."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from src.alignment import WordSeq, check_alpha
from src.config import DEFAULT_ALPHA
from src.errors import EmptyCorpusError, EmptyGridError
from src.metric import RasScore, score_utterance, summarize
from src.ph_tools.replace import ConfidentHyp, check_bar, logit_replace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepResult:
    best_bar: float
    best_ras: float
    curve: list[tuple[float, float]]    # (bar, micro RAS), ascending bar

    def to_dict(self, rounder: Callable[[float], float] = lambda v: v) -> dict:
        return {
            "best_bar": rounder(self.best_bar),
            "best_ras": rounder(self.best_ras),
            "curve": [{"bar": rounder(b), "ras": rounder(r)} for b, r in self.curve],
        }


def bar_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid start..stop, rounded to kill float drift."""
    if step <= 0:
        raise EmptyGridError(f"grid step must be positive, got {step}")
    if stop < start:
        raise EmptyGridError(f"grid stop {stop} is below start {start}")
    n = int(round((stop - start) / step))
    return [round(start + i * step, 10) for i in range(n + 1)]


def sweep_bar(
    corpus: Sequence[tuple[WordSeq, ConfidentHyp]],
    alpha: float = DEFAULT_ALPHA,
    grid: Sequence[float] = (),
    ids: Optional[Sequence[str]] = None,
) -> SweepResult:
    """Apply logit_replace corpus-wide at each bar and score micro RAS.

    The grid is de-duplicated and sorted; among equal RAS values the
    smallest bar wins.
    """
    if not corpus:
        raise EmptyCorpusError("sweep corpus is empty")
    bars = sorted({check_bar(b) for b in grid})
    if not bars:
        raise EmptyGridError("bar grid is empty")
    alpha = check_alpha(alpha)
    if ids is None:
        ids = [str(i) for i in range(len(corpus))]

    # the masked hypothesis only changes when a bar passes a confidence value
    cache: dict[tuple[int, WordSeq], RasScore] = {}
    curve: list[tuple[float, float]] = []
    best_bar, best_ras = bars[0], float("-inf")
    for bar in bars:
        scores = []
        for idx, (row_id, (ref, hyp)) in enumerate(zip(ids, corpus)):
            masked = logit_replace(hyp, bar)
            key = (idx, masked)
            if key not in cache:
                cache[key] = score_utterance(ref, masked, alpha, record_id=row_id)
            scores.append(cache[key])
        ras = summarize(scores).micro.ras
        curve.append((bar, ras))
        if ras > best_ras:
            best_bar, best_ras = bar, ras

    logger.info("Best bar %.4f over %d grid points (micro RAS %.4f)", best_bar, len(bars), best_ras)
    return SweepResult(best_bar=best_bar, best_ras=best_ras, curve=curve)

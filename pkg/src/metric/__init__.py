"""Reliability-Aware Score (RAS)."""

from src.metric.scoring import (
    Aggregate,
    CorpusSummary,
    RasScore,
    RowFailure,
    score_alignment,
    score_corpus,
    score_utterance,
    summarize,
)

__all__ = [
    "Aggregate",
    "CorpusSummary",
    "RasScore",
    "RowFailure",
    "score_alignment",
    "score_corpus",
    "score_utterance",
    "summarize",
]

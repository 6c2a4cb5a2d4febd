"""Placeholder-replaced targets and confidence-bar tuning."""

from src.ph_tools.counts import TableTokenCounter, TokenCountFn, word_count
from src.ph_tools.replace import (
    ConfidentHyp,
    ConfidentWord,
    gt_guided_replace,
    logit_replace,
    mask_report,
)
from src.ph_tools.sweep import SweepResult, bar_grid, sweep_bar

__all__ = [
    "ConfidentHyp",
    "ConfidentWord",
    "SweepResult",
    "TableTokenCounter",
    "TokenCountFn",
    "bar_grid",
    "gt_guided_replace",
    "logit_replace",
    "mask_report",
    "sweep_bar",
    "word_count",
]

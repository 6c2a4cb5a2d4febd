"""Word sequences with a distinguished placeholder token."""

import math
import re
from typing import Optional, Sequence

from src.config import PH_TOKEN
from src.errors import (
    EmptyReferenceError,
    InvalidAlphaError,
    InvalidTokenError,
    PlaceholderInReferenceError,
)

WordSeq = tuple[str, ...]

_WHITESPACE = re.compile(r"\s")


def normalize_hypothesis(words: Sequence[str]) -> WordSeq:
    """Collapse every run of consecutive placeholders into one."""
    merged: list[str] = []
    for word in words:
        if word == PH_TOKEN and merged and merged[-1] == PH_TOKEN:
            continue
        merged.append(word)
    return tuple(merged)


def count_placeholders(words: Sequence[str]) -> int:
    """Number of placeholder runs (merged count)."""
    runs = 0
    previous_ph = False
    for word in words:
        current_ph = word == PH_TOKEN
        if current_ph and not previous_ph:
            runs += 1
        previous_ph = current_ph
    return runs


def _check_tokens(words: Sequence[str], record_id: Optional[str]) -> None:
    for word in words:
        if not word or _WHITESPACE.search(word):
            raise InvalidTokenError(f"invalid token {word!r}", record_id=record_id)


def validate_reference(ref: Sequence[str], record_id: Optional[str] = None) -> WordSeq:
    """Return ref as a WordSeq, rejecting empty references and placeholders."""
    if not ref:
        raise EmptyReferenceError("reference is empty", record_id=record_id)
    if PH_TOKEN in ref:
        raise PlaceholderInReferenceError(
            "reference contains a placeholder", record_id=record_id
        )
    _check_tokens(ref, record_id)
    return tuple(ref)


def validate_hypothesis(hyp: Sequence[str], record_id: Optional[str] = None) -> WordSeq:
    _check_tokens(hyp, record_id)
    return tuple(hyp)


def check_alpha(alpha: float) -> float:
    """Validate the abstention cost factor; alpha must lie in (0, 1)."""
    try:
        value = float(alpha)
    except (TypeError, ValueError) as e:
        raise InvalidAlphaError(f"alpha must be a number, got {alpha!r}") from e
    if math.isnan(value) or not 0.0 < value < 1.0:
        raise InvalidAlphaError(f"alpha must lie in (0, 1), got {alpha!r}")
    return value

"""Synthetic listening-test data with a known alpha.

Each item pairs a short reference with a plain transcript A (random
substitutions, deletions and insertions) and an abstaining transcript B
built from A: A's errors become placeholders, and B also masks some
correct words and adds spurious placeholders between words. Only items
whose preference is uncertain at the true alpha and sensitive to it are
kept; votes are then drawn from the preference model.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from src.calibration.objective import PreparedPreference, delta_ras, sigmoid
from src.config import (
    PH_TOKEN,
    SYNTH_MAX_ATTEMPTS_PER_ITEM,
    SYNTH_MAX_DELTA,
    SYNTH_MIN_SLOPE,
    SYNTH_VOCABULARY,
)
from src.corpus.models import PreferenceRecord

logger = logging.getLogger(__name__)

SLOPE_STEP = 0.01


def _draw_pair(rng: np.random.Generator) -> tuple[list[str], list[str], list[str]]:
    vocab = SYNTH_VOCABULARY
    n = int(rng.integers(1, 4))
    ref = [vocab[i] for i in rng.integers(0, len(vocab), size=n)]

    def other(word: str) -> str:
        while True:
            w = vocab[int(rng.integers(0, len(vocab)))]
            if w != word:
                return w

    p_err = rng.uniform(0.1, 0.5)
    p_mask = 0.15
    p_spurious = 0.5

    plain: list[str] = []
    abstain: list[str] = []

    def gap() -> None:
        if rng.random() < p_spurious:
            abstain.append(PH_TOKEN)

    gap()
    for word in ref:
        r = rng.random()
        if r < p_err / 2:
            plain.append(other(word))
            abstain.append(PH_TOKEN)
        elif r < p_err:
            if rng.random() < 0.5:
                abstain.append(PH_TOKEN)
        else:
            plain.append(word)
            abstain.append(PH_TOKEN if rng.random() < p_mask else word)
        if rng.random() < p_err / 2:
            plain.append(other(word))
            abstain.append(PH_TOKEN)
        gap()
    return ref, plain, abstain


def generate_preferences(
    n_items: int,
    votes: int = 25,
    alpha_true: float = 0.5,
    tie_rate: float = 0.05,
    seed: Optional[int] = None,
) -> list[PreferenceRecord]:
    """Draw n_items preference records whose votes follow sigma(dR(alpha_true))."""
    if n_items < 1 or votes < 1:
        raise ValueError("n_items and votes must be positive")
    if not 0.0 <= tie_rate < 1.0:
        raise ValueError(f"tie_rate must lie in [0, 1), got {tie_rate}")
    rng = np.random.default_rng(seed)
    records: list[PreferenceRecord] = []
    rejected = 0

    for idx in range(n_items):
        for _ in range(SYNTH_MAX_ATTEMPTS_PER_ITEM):
            ref, plain, abstain = _draw_pair(rng)
            candidate = PreferenceRecord(
                id=f"synth-{idx:05d}",
                ref=" ".join(ref),
                hyp_a=" ".join(plain),
                hyp_b=" ".join(abstain),
                k_a=0, k_b=1, k_c=0,
            )
            prepared = PreparedPreference.from_record(candidate)
            d = delta_ras(prepared, alpha_true)
            slope = (
                delta_ras(prepared, alpha_true - SLOPE_STEP)
                - delta_ras(prepared, alpha_true + SLOPE_STEP)
            ) / (2 * SLOPE_STEP)
            if abs(d) <= SYNTH_MAX_DELTA and slope >= SYNTH_MIN_SLOPE:
                break
            rejected += 1
        else:
            raise RuntimeError(
                f"no informative item found in {SYNTH_MAX_ATTEMPTS_PER_ITEM} draws"
            )
        p_b = float(sigmoid(np.float64(d)))
        probs = [(1.0 - tie_rate) * (1.0 - p_b), (1.0 - tie_rate) * p_b, tie_rate]
        k_a, k_b, k_c = (int(k) for k in rng.multinomial(votes, probs))
        records.append(candidate.model_copy(update={"k_a": k_a, "k_b": k_b, "k_c": k_c}))

    logger.info("Generated %d synthetic items (%d candidate draws rejected)", n_items, rejected)
    return records


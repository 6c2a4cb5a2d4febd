"""Preference likelihood with tie regularization.

For each listening-test item the probability that a subject prefers the
abstaining transcript B over the plain transcript A is modelled as
sigma(dR), where dR = RAS(ref, B) - RAS(ref, A). Decisive votes enter a
cross-entropy term; indifferent votes pull dR towards zero through a
squared penalty weighted by lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from src.alignment import WordSeq
from src.config import DEFAULT_LAMBDA, LOG_PROB_FLOOR
from src.corpus.models import PreferenceRecord
from src.corpus.tokenizer import DEFAULT_NORMALIZER, TextNormalizer
from src.errors import EmptyRecordsError, InvalidLambdaError
from src.metric import score_utterance


@dataclass(frozen=True)
class PreparedPreference:
    """A preference record tokenized once for repeated loss evaluation."""
    id: str
    ref: WordSeq
    hyp_a: WordSeq
    hyp_b: WordSeq
    k_a: int
    k_b: int
    k_c: int
    ras_a: float    # A has no placeholder, so its score does not move with alpha

    @property
    def s(self) -> int:
        return self.k_a + self.k_b + self.k_c

    @classmethod
    def from_record(
        cls, record: PreferenceRecord, normalizer: TextNormalizer = DEFAULT_NORMALIZER
    ) -> "PreparedPreference":
        ref = normalizer.tokenize(record.ref)
        hyp_a = normalizer.tokenize(record.hyp_a)
        ras_a = score_utterance(ref, hyp_a, record_id=record.id).ras
        return cls(
            id=record.id,
            ref=ref,
            hyp_a=hyp_a,
            hyp_b=normalizer.tokenize(record.hyp_b),
            k_a=record.k_a,
            k_b=record.k_b,
            k_c=record.k_c,
            ras_a=ras_a,
        )


PreferenceLike = Union[PreferenceRecord, PreparedPreference]


def prepare_preferences(
    records: Sequence[PreferenceLike], normalizer: TextNormalizer = DEFAULT_NORMALIZER
) -> list[PreparedPreference]:
    if not records:
        raise EmptyRecordsError("no preference records")
    return [
        r if isinstance(r, PreparedPreference) else PreparedPreference.from_record(r, normalizer)
        for r in records
    ]


def delta_ras(record: PreferenceLike, alpha: float) -> float:
    """RAS(ref, B) - RAS(ref, A) at the given alpha."""
    if not isinstance(record, PreparedPreference):
        record = PreparedPreference.from_record(record)
    ras_b = score_utterance(record.ref, record.hyp_b, alpha, record_id=record.id).ras
    return ras_b - record.ras_a


def delta_vector(records: Sequence[PreparedPreference], alpha: float) -> np.ndarray:
    return np.array([delta_ras(r, alpha) for r in records], dtype=np.float64)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # tanh form does not overflow for large |x|
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass(frozen=True)
class LossBreakdown:
    total: float
    pref: float
    tie: float


def loss_from_deltas(
    deltas: np.ndarray,
    votes: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
) -> LossBreakdown:
    """Loss for precomputed dR values; votes is a (K, 3) array of k_a, k_b, k_c."""
    s = votes.sum(axis=1).astype(np.float64)
    w_a, w_b, w_c = (votes[:, i] / s for i in range(3))
    p = np.clip(sigmoid(deltas), LOG_PROB_FLOOR, 1.0 - LOG_PROB_FLOOR)
    pref = -float(np.mean(w_b * np.log(p) + w_a * np.log1p(-p)))
    tie = float(np.mean(w_c * deltas ** 2))
    return LossBreakdown(total=pref + lam * tie, pref=pref, tie=tie)


def vote_matrix(records: Sequence[PreparedPreference]) -> np.ndarray:
    return np.array([(r.k_a, r.k_b, r.k_c) for r in records], dtype=np.int64)


def check_lambda(lam: float) -> float:
    if not lam >= 0.0:
        raise InvalidLambdaError(f"lambda must be >= 0, got {lam}")
    return float(lam)


def preference_loss(
    records: Sequence[PreferenceLike],
    alpha: float,
    lam: float = DEFAULT_LAMBDA,
) -> LossBreakdown:
    """Total, preference and tie loss of the records at alpha."""
    lam = check_lambda(lam)
    prepared = prepare_preferences(records)
    return loss_from_deltas(delta_vector(prepared, alpha), vote_matrix(prepared), lam)

"""Stateless handlers behind the reward endpoints."""

from __future__ import annotations

import logging
from typing import Any, Mapping, Sequence, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from src.config import ADVANTAGE_STD_FLOOR, DEFAULT_ALPHA
from src.corpus.report import round_value
from src.corpus.tokenizer import DEFAULT_NORMALIZER, TextNormalizer
from src.errors import EmptyGroupError, MalformedRequestError, RasError
from src.metric import score_utterance
from src.reward_service.models import AdvantageRequest, RewardRequest

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def parse_request(model: type[M], payload: Any) -> M:
    """Validate a decoded JSON body, raising MalformedRequestError on failure."""
    if not isinstance(payload, Mapping):
        raise MalformedRequestError("request body must be a JSON object")
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(p) for p in first["loc"]) or "body"
        logger.warning("Rejected %s: %s: %s", model.__name__, loc, first["msg"])
        raise MalformedRequestError(f"{loc}: {first['msg']}") from e


def score_batch(
    req: RewardRequest,
    default_alpha: float = DEFAULT_ALPHA,
    normalizer: TextNormalizer = DEFAULT_NORMALIZER,
) -> list[dict[str, Any]]:
    """Score every item in request order; failing items carry an error field."""
    alpha = req.alpha if req.alpha is not None else default_alpha
    results: list[dict[str, Any]] = []
    for item in req.items:
        try:
            score = score_utterance(
                normalizer.tokenize(item.ref),
                normalizer.tokenize(item.hyp),
                alpha,
                record_id=item.id,
            )
        except RasError as e:
            results.append({"id": item.id, "error": type(e).__name__, "detail": str(e)})
            continue
        results.append({
            "id": item.id,
            "ras": round_value(score.ras),
            "usefulness": round_value(score.usefulness),
            "cost": round_value(score.cost),
        })
    return results


def compute_advantages(rewards: Sequence[float]) -> tuple[np.ndarray, float, float, bool]:
    """(r - mean) / std with population std; zero-variance groups give zeros."""
    r = np.asarray(rewards, dtype=np.float64)
    if r.size == 0:
        raise EmptyGroupError("advantage group has no rewards")
    if not np.isfinite(r).all():
        raise MalformedRequestError("rewards must be finite numbers")
    mean = float(r.mean())
    std = float(r.std())
    if std < ADVANTAGE_STD_FLOOR:
        return np.zeros_like(r), mean, std, True
    return (r - mean) / std, mean, std, False


def group_advantages(req: AdvantageRequest) -> list[dict[str, Any]]:
    results: list[dict[str, Any]] = []
    for group in req.groups:
        try:
            adv, mean, std, degenerate = compute_advantages(group.rewards)
        except EmptyGroupError as e:
            raise EmptyGroupError(f"group {group.group_id!r}: {e}") from e
        if degenerate:
            logger.warning("Group %s has zero reward variance", group.group_id)
        results.append({
            "group_id": group.group_id,
            "advantages": adv.tolist(),
            "mean": mean,
            "std": std,
            "degenerate": degenerate,
        })
    return results

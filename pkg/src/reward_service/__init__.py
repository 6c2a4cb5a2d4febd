"""Batch RAS rewards and group-relative advantages over HTTP."""

from src.reward_service.app import create_app, serve
from src.reward_service.handlers import (
    compute_advantages,
    group_advantages,
    parse_request,
    score_batch,
)
from src.reward_service.models import (
    AdvantageGroup,
    AdvantageRequest,
    RewardItem,
    RewardRequest,
    ServiceSettings,
)

__all__ = [
    "AdvantageGroup",
    "AdvantageRequest",
    "RewardItem",
    "RewardRequest",
    "ServiceSettings",
    "compute_advantages",
    "create_app",
    "group_advantages",
    "parse_request",
    "score_batch",
    "serve",
]

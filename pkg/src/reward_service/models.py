"""Request and settings schemas for the reward service."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, field_validator

from src.config import (
    DEFAULT_ALPHA,
    MAX_BATCH_ITEMS,
    MAX_PAYLOAD_BYTES,
    SERVICE_HOST,
    SERVICE_PORT,
)
from src.corpus.tokenizer import TextNormalizer, TokenizeMode


class RewardItem(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    ref: str
    hyp: str = ""


class RewardRequest(BaseModel):
    """A batch of sampled transcriptions to score."""

    model_config = ConfigDict(extra="forbid")

    alpha: Optional[float] = None
    items: list[RewardItem] = Field(min_length=1)

    @field_validator("alpha")
    @classmethod
    def alpha_in_open_interval(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not 0.0 < v < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {v}")
        return v

    @field_validator("items")
    @classmethod
    def ids_unique(cls, v: list[RewardItem]) -> list[RewardItem]:
        seen: set[str] = set()
        for item in v:
            if item.id in seen:
                raise ValueError(f"duplicate item id {item.id!r}")
            seen.add(item.id)
        return v


class AdvantageGroup(BaseModel):
    model_config = ConfigDict(extra="forbid")

    group_id: str
    rewards: list[FiniteFloat]


class AdvantageRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    groups: list[AdvantageGroup] = Field(min_length=1)


class ServiceSettings(BaseModel):
    """Bind address, defaults and limits; immutable once the app is built."""

    model_config = ConfigDict(frozen=True)

    host: str = SERVICE_HOST
    port: int = Field(default=SERVICE_PORT, ge=0, le=65535)
    default_alpha: float = DEFAULT_ALPHA
    max_batch_items: int = Field(default=MAX_BATCH_ITEMS, ge=1)
    max_payload_bytes: int = Field(default=MAX_PAYLOAD_BYTES, ge=1)
    tokenize: TokenizeMode = TokenizeMode.WHITESPACE
    lowercase: bool = False
    strip_punct: bool = False

    @field_validator("default_alpha")
    @classmethod
    def alpha_in_open_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError(f"default_alpha must lie in (0, 1), got {v}")
        return v

    @property
    def normalizer(self) -> TextNormalizer:
        return TextNormalizer(self.tokenize, self.lowercase, self.strip_punct)

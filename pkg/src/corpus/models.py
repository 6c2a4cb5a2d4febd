"""Pydantic schemas for corpus and preference records."""

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import PH_TOKEN


class ConfidentWordData(BaseModel):
    w: str = Field(min_length=1)
    conf: float = Field(ge=0.0, le=1.0)


class UtteranceRecord(BaseModel):
    """One corpus row: reference, hypothesis and optional word confidences.

    Logit-mode rows may carry `words: [{w, conf}]` instead of hyp and
    confidences; they are folded into the same shape on validation.
    """

    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    ref: str
    hyp: str = ""
    confidences: Optional[list[float]] = None

    @model_validator(mode="before")
    @classmethod
    def fold_words(cls, data: Any) -> Any:
        if isinstance(data, dict) and "words" in data:
            data = dict(data)
            if "hyp" in data or "confidences" in data:
                raise ValueError("use either 'words' or 'hyp'/'confidences', not both")
            words = [ConfidentWordData.model_validate(w) for w in data.pop("words")]
            data["hyp"] = " ".join(w.w for w in words)
            data["confidences"] = [w.conf for w in words]
        return data

    @field_validator("id")
    @classmethod
    def strip_id(cls, v: str) -> str:
        v = v.strip()
        if not v:
            raise ValueError("id must not be blank")
        return v

    @field_validator("confidences")
    @classmethod
    def check_confidences(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        if v is not None:
            for c in v:
                if not 0.0 <= c <= 1.0:
                    raise ValueError(f"confidence {c} outside [0, 1]")
        return v

    def to_json_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"id": self.id, "ref": self.ref, "hyp": self.hyp}
        if self.confidences is not None:
            data["confidences"] = self.confidences
        return data


class PreferenceRecord(BaseModel):
    """One listening-test item: reference G, plain transcript A, abstaining B.

    k_a, k_b and k_c count subjects preferring A, preferring B, and
    indifferent.
    """

    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    ref: str
    hyp_a: str
    hyp_b: str
    k_a: int = Field(ge=0)
    k_b: int = Field(ge=0)
    k_c: int = Field(ge=0)

    @field_validator("hyp_a")
    @classmethod
    def plain_has_no_placeholder(cls, v: str) -> str:
        if PH_TOKEN in v:
            raise ValueError("hyp_a must not contain placeholders")
        return v

    @model_validator(mode="after")
    def has_votes(self) -> "PreferenceRecord":
        if self.s <= 0:
            raise ValueError("record has no votes (k_a + k_b + k_c must be > 0)")
        return self

    @property
    def s(self) -> int:
        return self.k_a + self.k_b + self.k_c

"""Text to word sequences: whitespace or mixed CJK tokenization."""

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum

from src.alignment import WordSeq
from src.config import PH_TOKEN


class TokenizeMode(str, Enum):
    WHITESPACE = "whitespace"
    MIXED_CJK = "mixed-cjk"


# CJK unified ideographs (+ extension A, compatibility), kana, CJK symbols
_CJK_CHAR = re.compile(
    r"[\u3040-\u30ff\u3400-\u4dbf\u4e00-\u9fff\uf900-\ufaff\u3005-\u3007]"
)
_PH_SPLIT = re.compile(f"({re.escape(PH_TOKEN)})")


def _strip_punctuation(word: str) -> str:
    return "".join(ch for ch in word if not unicodedata.category(ch).startswith("P"))


def _split_cjk(word: str) -> list[str]:
    """Split CJK characters into single-character words, keep other runs whole."""
    pieces: list[str] = []
    buf: list[str] = []
    for ch in word:
        if _CJK_CHAR.match(ch):
            if buf:
                pieces.append("".join(buf))
                buf = []
            pieces.append(ch)
        else:
            buf.append(ch)
    if buf:
        pieces.append("".join(buf))
    return pieces


@dataclass(frozen=True)
class TextNormalizer:
    """Tokenization settings shared by loaders, CLI and service.

    The placeholder token is always split out as its own word, even when
    written without spaces ("<ph><ph>"), and is never lowercased or stripped.
    """

    mode: TokenizeMode = TokenizeMode.WHITESPACE
    lowercase: bool = False
    strip_punct: bool = False

    def _normalize_word(self, word: str) -> list[str]:
        if self.lowercase:
            word = word.lower()
        if self.strip_punct:
            word = _strip_punctuation(word)
        if not word:
            return []
        if self.mode is TokenizeMode.MIXED_CJK:
            return _split_cjk(word)
        return [word]

    def tokenize_word(self, raw: str) -> WordSeq:
        """Tokens for one whitespace-delimited chunk of text."""
        out: list[str] = []
        for piece in _PH_SPLIT.split(raw):
            if not piece:
                continue
            if piece == PH_TOKEN:
                out.append(PH_TOKEN)
            else:
                out.extend(self._normalize_word(piece))
        return tuple(out)

    def tokenize(self, text: str) -> WordSeq:
        out: list[str] = []
        for raw in text.split():
            out.extend(self.tokenize_word(raw))
        return tuple(out)


DEFAULT_NORMALIZER = TextNormalizer()

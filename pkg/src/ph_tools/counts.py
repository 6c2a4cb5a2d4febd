"""Placeholder counts per text segment."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Protocol, Union

from src.corpus.loader import load_token_table


class TokenCountFn(Protocol):
    def __call__(self, segment: str) -> int: ...


def word_count(segment: str) -> int:
    """One placeholder per word."""
    return max(1, len(segment.split()))


class TableTokenCounter:
    """Counts from a {segment: count} table.

    A segment missing from the table is counted word by word; words missing
    from the table count as 1.
    """

    def __init__(self, table: Mapping[str, int]) -> None:
        self.table = dict(table)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TableTokenCounter":
        return cls(load_token_table(path))

    def __call__(self, segment: str) -> int:
        if segment in self.table:
            return self.table[segment]
        return max(1, sum(self.table.get(w, 1) for w in segment.split()))

    def __len__(self) -> int:
        return len(self.table)

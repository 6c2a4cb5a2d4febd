"""Line-delimited JSON corpus readers and atomic writers."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import IO, Any, Iterator, Optional, Union

from pydantic import BaseModel, ValidationError

from src.config import PH_TOKEN
from src.corpus.models import PreferenceRecord, UtteranceRecord
from src.corpus.tokenizer import DEFAULT_NORMALIZER, TextNormalizer
from src.errors import (
    ConfidenceLengthMismatchError,
    CorpusParseError,
    DuplicateIdError,
    EmptyReferenceError,
    PlaceholderInReferenceError,
    RecordError,
)
from src.metric import RowFailure

logger = logging.getLogger(__name__)

Source = Union[str, Path, IO[str]]


def _iter_lines(source: Source) -> Iterator[tuple[int, str]]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise FileNotFoundError(f"Corpus file not found: {path}")
        with open(path, encoding="utf-8") as f:
            yield from enumerate(f, 1)
    else:
        yield from enumerate(source, 1)


def _iter_objects(
    source: Source, schema: type[BaseModel]
) -> Iterator[tuple[int, Union[BaseModel, RecordError]]]:
    """Parse and validate one record per non-blank line.

    A line that fails is yielded as its RecordError so callers can either
    raise it or keep going.
    """
    for line_num, line in _iter_lines(source):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            yield line_num, CorpusParseError(f"invalid JSON: {e.msg}", line=line_num)
            continue
        if not isinstance(data, dict):
            yield line_num, CorpusParseError("record must be a JSON object", line=line_num)
            continue
        try:
            yield line_num, schema.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(p) for p in first["loc"]) or "record"
            record_id = data.get("id")
            yield line_num, CorpusParseError(
                f"{loc}: {first['msg']}",
                record_id=record_id if isinstance(record_id, str) else None,
                line=line_num,
            )


def _check_utterance(
    record: UtteranceRecord, line_num: int, normalizer: TextNormalizer
) -> Optional[RecordError]:
    ref_words = normalizer.tokenize(record.ref)
    if not ref_words:
        return EmptyReferenceError("reference is empty", record_id=record.id, line=line_num)
    if PH_TOKEN in ref_words:
        return PlaceholderInReferenceError(
            "reference contains a placeholder", record_id=record.id, line=line_num
        )
    if record.confidences is not None:
        n_words = len(record.hyp.split())
        if len(record.confidences) != n_words:
            return ConfidenceLengthMismatchError(
                f"{len(record.confidences)} confidences for {n_words} hypothesis words",
                record_id=record.id, line=line_num,
            )
    return None


def _iter_utterances(
    source: Source, normalizer: TextNormalizer
) -> Iterator[Union[UtteranceRecord, RecordError]]:
    seen: dict[str, int] = {}
    for line_num, item in _iter_objects(source, UtteranceRecord):
        if isinstance(item, RecordError):
            yield item
            continue
        if item.id in seen:
            yield DuplicateIdError(
                f"duplicate id (first seen on line {seen[item.id]})",
                record_id=item.id, line=line_num,
            )
            continue
        seen[item.id] = line_num
        yield _check_utterance(item, line_num, normalizer) or item


def load_corpus(
    source: Source,
    normalizer: TextNormalizer = DEFAULT_NORMALIZER,
) -> list[UtteranceRecord]:
    """Read and validate an utterance corpus, raising on the first bad row.

    Checks every row for a unique id, a reference that is non-empty after
    tokenization and free of placeholders, and (if given) one confidence per
    whitespace-separated hypothesis word.
    """
    records: list[UtteranceRecord] = []
    for item in _iter_utterances(source, normalizer):
        if isinstance(item, RecordError):
            raise item
        records.append(item)
    logger.info("Loaded %d utterance records", len(records))
    return records


def load_corpus_lenient(
    source: Source,
    normalizer: TextNormalizer = DEFAULT_NORMALIZER,
) -> tuple[list[UtteranceRecord], list[RowFailure]]:
    """Like load_corpus, but bad rows become RowFailures instead of errors.

    A row without a usable id is reported as ``line:<n>``. For a duplicate
    id the first row is kept.
    """
    records: list[UtteranceRecord] = []
    failures: list[RowFailure] = []
    for item in _iter_utterances(source, normalizer):
        if isinstance(item, RecordError):
            logger.warning("Skipping row: %s", item)
            failures.append(RowFailure(id=item.record_id or f"line:{item.line}", error=str(item)))
        else:
            records.append(item)
    logger.info("Loaded %d utterance records, %d rejected", len(records), len(failures))
    return records, failures


def load_preferences(source: Source) -> list[PreferenceRecord]:
    """Read listening-test preference records, rejecting duplicate ids."""
    records: list[PreferenceRecord] = []
    seen: set[str] = set()
    for line_num, item in _iter_objects(source, PreferenceRecord):
        if isinstance(item, RecordError):
            raise item
        if item.id in seen:
            raise DuplicateIdError("duplicate id", record_id=item.id, line=line_num)
        seen.add(item.id)
        records.append(item)
    logger.info("Loaded %d preference records", len(records))
    return records


def load_token_table(path: Union[str, Path]) -> dict[str, int]:
    """Load a {segment: token count} JSON object."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Token count table not found: {path}")
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise CorpusParseError(f"token table must be a JSON object: {path}")
    table: dict[str, int] = {}
    for segment, count in data.items():
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise CorpusParseError(
                f"token count must be a positive integer, got {count!r}", record_id=segment
            )
        table[segment] = count
    return table


def dumps_jsonl(rows: list[dict[str, Any]]) -> str:
    return "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows)


def dump_corpus(records: list[UtteranceRecord]) -> str:
    """Serialize records back to the line-delimited input format."""
    return dumps_jsonl([r.to_json_dict() for r in records])


def dump_preferences(records: list[PreferenceRecord]) -> str:
    return dumps_jsonl([r.model_dump() for r in records])


def _current_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """Write text via a temp file in the target directory, then rename.

    The result gets the usual umask-derived mode rather than mkstemp's 0600.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.chmod(tmp, 0o666 & ~_current_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path

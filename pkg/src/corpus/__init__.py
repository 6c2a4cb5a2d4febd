"""Corpus reading, validation and report emission."""

from src.corpus.loader import (
    dump_corpus,
    dump_preferences,
    load_corpus,
    load_corpus_lenient,
    load_preferences,
    load_token_table,
    write_text_atomic,
)
from src.corpus.models import PreferenceRecord, UtteranceRecord
from src.corpus.report import (
    EvalReport,
    ReportFormat,
    ScatterPoint,
    UtteranceRow,
    build_report,
    emit_report,
    format_report,
    report_to_doc,
    round_value,
)
from src.corpus.tokenizer import DEFAULT_NORMALIZER, TextNormalizer, TokenizeMode

__all__ = [
    "DEFAULT_NORMALIZER",
    "EvalReport",
    "PreferenceRecord",
    "ReportFormat",
    "ScatterPoint",
    "TextNormalizer",
    "TokenizeMode",
    "UtteranceRecord",
    "UtteranceRow",
    "build_report",
    "dump_corpus",
    "dump_preferences",
    "emit_report",
    "format_report",
    "load_corpus",
    "load_corpus_lenient",
    "load_preferences",
    "load_token_table",
    "report_to_doc",
    "round_value",
    "write_text_atomic",
]

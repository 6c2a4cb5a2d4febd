"""Evaluation reports: per-utterance rows, corpus summary, WER/RAS scatter.

Three serializations are supported. `doc` is a JSON document with every
number rounded to REPORT_DECIMALS, `tsv` is the per-utterance table, and
`md` is a markdown summary rendered from templates/score_summary.md.j2.
All three are byte-stable for identical inputs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Sequence

import numpy as np

from src.alignment import check_alpha
from src.config import REPORT_DECIMALS
from src.corpus.models import UtteranceRecord
from src.corpus.renderer import fixed, render_template
from src.corpus.tokenizer import DEFAULT_NORMALIZER, TextNormalizer
from src.errors import RasError
from src.metric import CorpusSummary, RasScore, RowFailure, score_utterance, summarize

logger = logging.getLogger(__name__)


class ReportFormat(str, Enum):
    DOC = "doc"
    TSV = "tsv"
    MD = "md"


# ---------------------------------------------------------------------------
# Data structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UtteranceRow:
    id: str
    ras: float
    usefulness: float
    cost: float
    wer: Optional[float]
    n_ref: int
    ph_count: int

    @classmethod
    def from_score(cls, record_id: str, score: RasScore) -> "UtteranceRow":
        return cls(
            id=record_id,
            ras=score.ras,
            usefulness=score.usefulness,
            cost=score.cost,
            wer=score.wer,
            n_ref=score.n_ref,
            ph_count=score.ph_count,
        )


@dataclass(frozen=True)
class ScatterPoint:
    id: str
    alpha: float
    wer: Optional[float]    # None for hypotheses with placeholders
    ras: float


@dataclass
class EvalReport:
    alpha: float
    rows: list[UtteranceRow]
    summary: CorpusSummary
    scatter: list[ScatterPoint] = field(default_factory=list)
    wer_ras_correlation: Optional[float] = None

    @property
    def failures(self) -> list[RowFailure]:
        return self.summary.failures


# ---------------------------------------------------------------------------
# Building
# ---------------------------------------------------------------------------

def _correlation(rows: Sequence[UtteranceRow]) -> Optional[float]:
    """Pearson r between WER and RAS over placeholder-free rows."""
    pairs = [(r.wer, r.ras) for r in rows if r.wer is not None]
    if len(pairs) < 2:
        return None
    arr = np.asarray(pairs, dtype=np.float64)
    if np.ptp(arr[:, 0]) == 0.0 or np.ptp(arr[:, 1]) == 0.0:
        return None
    return float(np.corrcoef(arr[:, 0], arr[:, 1])[0, 1])


def build_report(
    records: Sequence[UtteranceRecord],
    alpha: float,
    normalizer: TextNormalizer = DEFAULT_NORMALIZER,
    scatter_alphas: Sequence[float] = (),
    load_failures: Sequence[RowFailure] = (),
) -> EvalReport:
    """Score every record and assemble the report.

    Rows are ordered by id. A row that fails to score is logged and listed
    under failures; the rest of the corpus is still scored. Rows already
    rejected while loading go first in the failure list. Each extra alpha
    in scatter_alphas adds one more scatter series.
    """
    alpha = check_alpha(alpha)
    extra_alphas = sorted({check_alpha(a) for a in scatter_alphas} - {alpha})

    rows: list[UtteranceRow] = []
    scores: list[RasScore] = []
    failures: list[RowFailure] = list(load_failures)
    scatter: list[ScatterPoint] = []
    extra: list[ScatterPoint] = []

    for record in sorted(records, key=lambda r: r.id):
        ref = normalizer.tokenize(record.ref)
        hyp = normalizer.tokenize(record.hyp)
        try:
            score = score_utterance(ref, hyp, alpha, record_id=record.id)
        except RasError as e:
            logger.warning("Skipping %s: %s", record.id, e)
            failures.append(RowFailure(id=record.id, error=str(e)))
            continue
        scores.append(score)
        rows.append(UtteranceRow.from_score(record.id, score))
        scatter.append(ScatterPoint(record.id, alpha, score.wer, score.ras))
        for a in extra_alphas:
            s = score_utterance(ref, hyp, a, record_id=record.id)
            extra.append(ScatterPoint(record.id, a, s.wer, s.ras))

    summary = summarize(scores, failures)
    logger.info(
        "Scored %d/%d rows at alpha=%.4f (micro RAS %.4f)",
        summary.count, len(records), alpha, summary.micro.ras,
    )
    return EvalReport(
        alpha=alpha,
        rows=rows,
        summary=summary,
        scatter=scatter + extra,
        wer_ras_correlation=_correlation(rows),
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def round_value(value: Optional[float]) -> Optional[float]:
    """Round to REPORT_DECIMALS, folding -0.0 into 0.0."""
    if value is None:
        return None
    return round(value, REPORT_DECIMALS) + 0.0


def _aggregate_doc(agg) -> dict[str, Any]:
    return {
        "ras": round_value(agg.ras),
        "usefulness": round_value(agg.usefulness),
        "cost": round_value(agg.cost),
    }


def report_to_doc(report: EvalReport) -> dict[str, Any]:
    summary = report.summary
    return {
        "alpha": round_value(report.alpha),
        "summary": {
            "count": summary.count,
            "micro": _aggregate_doc(summary.micro),
            "macro": _aggregate_doc(summary.macro),
            "total_matches": summary.total_matches,
            "total_edit_cost": round_value(summary.total_edit_cost),
            "total_ref_words": summary.total_ref_words,
            "wer": round_value(summary.wer),
            "wer_ras_correlation": round_value(report.wer_ras_correlation),
        },
        "per_utterance": [
            {
                "id": r.id,
                "ras": round_value(r.ras),
                "usefulness": round_value(r.usefulness),
                "cost": round_value(r.cost),
                "wer": round_value(r.wer),
                "n_ref": r.n_ref,
                "ph_count": r.ph_count,
            }
            for r in report.rows
        ],
        "scatter": [
            {
                "id": p.id,
                "alpha": round_value(p.alpha),
                "wer": round_value(p.wer),
                "ras": round_value(p.ras),
            }
            for p in report.scatter
        ],
        "failures": [{"id": f.id, "error": f.error} for f in report.failures],
    }


def render_doc(report: EvalReport) -> str:
    return json.dumps(report_to_doc(report), indent=2, ensure_ascii=False) + "\n"


TSV_COLUMNS = ("id", "ras", "usefulness", "cost", "wer", "n_ref", "ph_count")


def render_tsv(report: EvalReport) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for r in report.rows:
        lines.append("\t".join([
            r.id,
            fixed(r.ras),
            fixed(r.usefulness),
            fixed(r.cost),
            fixed(r.wer) if r.wer is not None else "NA",
            str(r.n_ref),
            str(r.ph_count),
        ]))
    return "\n".join(lines) + "\n"


def render_markdown(report: EvalReport) -> str:
    return render_template(
        "score_summary.md.j2",
        alpha=report.alpha,
        summary=report.summary,
        rows=report.rows,
        failures=report.failures,
        correlation=report.wer_ras_correlation,
    )


def format_report(report: EvalReport, fmt: ReportFormat = ReportFormat.DOC) -> str:
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.TSV:
        return render_tsv(report)
    if fmt is ReportFormat.MD:
        return render_markdown(report)
    return render_doc(report)


def emit_report(
    records: Sequence[UtteranceRecord],
    alpha: float,
    fmt: ReportFormat = ReportFormat.DOC,
    normalizer: TextNormalizer = DEFAULT_NORMALIZER,
    scatter_alphas: Sequence[float] = (),
) -> str:
    """Score records and serialize the report in one step."""
    return format_report(build_report(records, alpha, normalizer, scatter_alphas), fmt)

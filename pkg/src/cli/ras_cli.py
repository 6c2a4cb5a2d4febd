"""Command-line entry point for the RAS toolkit.

Usage:
    python -m src.cli score data/fixtures/golden_corpus.jsonl --alpha 0.5064
    python -m src.cli score corpus.jsonl --format tsv --out scores.tsv
    python -m src.cli calibrate prefs.jsonl --lambda 0.1 --out alpha.json
    python -m src.cli make-ph corpus.jsonl --token-table counts.json --out ph.jsonl
    python -m src.cli replace-logit confident.jsonl --bar 0.2 --out ph.jsonl
    python -m src.cli sweep-bar confident.jsonl --bar-grid 0.0:0.5:0.01
    python -m src.cli gen-synth-prefs --n-items 200 --votes 25 --seed 7 --out prefs.jsonl
    python -m src.cli serve --port 8080

Exit codes: 0 ok, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.alignment import check_alpha
from src.calibration import fit_alpha, generate_preferences
from src.cli.console import (
    print_error,
    print_header,
    print_info,
    print_success,
    print_summary_box,
    print_table,
    print_warning,
)
from src.config import (
    DEFAULT_ALPHA,
    DEFAULT_BAR,
    DEFAULT_BAR_GRID,
    DEFAULT_LAMBDA,
    EXIT_DATA,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    MAX_BATCH_ITEMS,
    SERVICE_HOST,
    SERVICE_PORT,
    VERSION,
)
from src.corpus import (
    ReportFormat,
    TextNormalizer,
    TokenizeMode,
    UtteranceRecord,
    build_report,
    dump_corpus,
    dump_preferences,
    format_report,
    load_corpus_lenient,
    load_preferences,
    round_value,
    write_text_atomic,
)
from src.corpus.renderer import render_template
from src.errors import (
    BarOutOfRangeError,
    EmptyGridError,
    InvalidAlphaError,
    InvalidLambdaError,
    RasError,
)
from src.metric import RowFailure
from src.ph_tools import (
    ConfidentHyp,
    TableTokenCounter,
    bar_grid,
    gt_guided_replace,
    logit_replace,
    mask_report,
    sweep_bar,
    word_count,
)
from src.ph_tools.replace import check_bar

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad flag value or missing input; exits with EXIT_USAGE."""


class DataError(Exception):
    """Row failures under --strict; exits with EXIT_DATA."""


class CliParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CliConfig(BaseModel):
    """Options shared by the corpus subcommands, validated before any work."""

    model_config = ConfigDict(frozen=True)

    alpha: float = DEFAULT_ALPHA
    tokenize: TokenizeMode = TokenizeMode.WHITESPACE
    lowercase: bool = False
    strip_punct: bool = False
    strict: bool = False
    input: Optional[Path] = None
    out: Optional[Path] = None
    fmt: ReportFormat = ReportFormat.DOC
    seed: Optional[int] = Field(default=None, ge=0)

    @field_validator("alpha")
    @classmethod
    def alpha_in_open_interval(cls, v: float) -> float:
        return check_alpha(v)

    @field_validator("input")
    @classmethod
    def input_exists(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and not v.is_file():
            raise ValueError(f"input file not found: {v}")
        return v

    @property
    def normalizer(self) -> TextNormalizer:
        return TextNormalizer(self.tokenize, self.lowercase, self.strip_punct)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        fields = {
            "alpha": getattr(args, "alpha", DEFAULT_ALPHA),
            "tokenize": getattr(args, "tokenize", TokenizeMode.WHITESPACE.value),
            "lowercase": getattr(args, "lowercase", False),
            "strip_punct": getattr(args, "strip_punct", False),
            "strict": getattr(args, "strict", False),
            "input": getattr(args, "input", None),
            "out": getattr(args, "out", None),
            "fmt": getattr(args, "format", ReportFormat.DOC.value),
            "seed": getattr(args, "seed", None),
        }
        try:
            return cls(**fields)
        except ValidationError as e:
            first = e.errors()[0]
            raise UsageError(f"--{first['loc'][0]}: {first['msg']}") from e


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _write_output(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_text_atomic(out, text)
        print_success(f"Wrote {out}")


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _check_failures(failures: list[RowFailure], cfg: CliConfig) -> None:
    if not failures:
        return
    print_warning(f"{len(failures)} row(s) failed")
    print_table(["id", "error"], [[f.id, f.error] for f in failures])
    if cfg.strict:
        raise DataError(f"{len(failures)} row(s) failed under --strict")


def parse_bar_grid(text: str) -> list[float]:
    """START:STOP:STEP (inclusive) or a comma-separated list of bars."""
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            grid = bar_grid(start, stop, step)
        else:
            grid = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise UsageError(f"--bar-grid: cannot parse {text!r}") from e
    if not grid:
        raise UsageError("--bar-grid is empty")
    for bar in grid:
        check_bar(bar)
    return grid


def confident_hyp(record: UtteranceRecord, normalizer: TextNormalizer) -> ConfidentHyp:
    """Pair hypothesis tokens with confidences; a split word shares its confidence."""
    if record.confidences is None:
        raise RasError(f"row {record.id!r} has no confidences")
    pairs: list[tuple[str, float]] = []
    for raw, conf in zip(record.hyp.split(), record.confidences):
        pairs.extend((token, conf) for token in normalizer.tokenize_word(raw))
    return ConfidentHyp.from_pairs(pairs)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_score(args: argparse.Namespace) -> int:
    """Score a corpus and write the evaluation report."""
    cfg = CliConfig.from_args(args)
    scatter_alphas = [check_alpha(a) for a in (args.scatter_alpha or [])]
    print_header("RAS Scoring")
    print_info(f"Input: {cfg.input}  alpha={cfg.alpha}  tokenize={cfg.tokenize.value}")

    records, load_failures = load_corpus_lenient(cfg.input, cfg.normalizer)
    report = build_report(records, cfg.alpha, cfg.normalizer, scatter_alphas, load_failures)
    _write_output(format_report(report, cfg.fmt), cfg.out)

    s = report.summary
    print_summary_box("Corpus Summary", {
        "Rows scored": f"{s.count}/{len(records) + len(load_failures)}",
        "Micro RAS": f"{s.micro.ras:.6f}",
        "Macro RAS": f"{s.macro.ras:.6f}",
        "Usefulness": f"{s.micro.usefulness:.6f}",
        "Cost": f"{s.micro.cost:.6f}",
        "WER": f"{s.wer:.6f}" if s.wer is not None else "n/a (placeholders present)",
    })
    _check_failures(report.failures, cfg)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    """Fit alpha to listening-test preferences."""
    cfg = CliConfig.from_args(args)
    print_header("Alpha Calibration")
    records = load_preferences(cfg.input)
    print_info(f"{len(records)} preference records, lambda={args.lam}")

    result = fit_alpha(records, lam=args.lam, normalizer=cfg.normalizer)
    if cfg.fmt is ReportFormat.MD:
        text = render_template("calibration.md.j2", result=result)
    else:
        text = _dump_json(result.to_dict(round_value))
    _write_output(text, cfg.out)

    print_summary_box("Calibration", {
        "alpha*": f"{result.alpha_star:.4f}",
        "Total loss": f"{result.total_loss:.6f}",
        "Mean delta RAS": f"{result.mean_delta_ras:.4f}",
        "Tie rate": f"{result.tie_rate:.2%}",
    })
    if result.at_boundary:
        print_warning("alpha* lies on the search boundary")
    if result.flat:
        print_warning("Loss is flat in alpha; every delta RAS is zero")
    return EXIT_OK


def cmd_make_ph(args: argparse.Namespace) -> int:
    """Replace erroneous hypothesis segments with placeholders."""
    cfg = CliConfig.from_args(args)
    print_header("GT-guided Placeholder Replacement")
    counts = word_count
    if args.token_table is not None:
        if not args.token_table.is_file():
            raise UsageError(f"token table not found: {args.token_table}")
        counts = TableTokenCounter.from_file(args.token_table)
        print_info(f"Token table: {args.token_table} ({len(counts)} entries)")

    records, failures = load_corpus_lenient(cfg.input, cfg.normalizer)
    out_records: list[UtteranceRecord] = []
    replaced = 0
    for record in sorted(records, key=lambda r: r.id):
        ref = cfg.normalizer.tokenize(record.ref)
        hyp = cfg.normalizer.tokenize(record.hyp)
        try:
            y_ph = gt_guided_replace(ref, hyp, counts, record_id=record.id)
        except RasError as e:
            logger.warning("Skipping %s: %s", record.id, e)
            failures.append(RowFailure(record.id, str(e)))
            continue
        replaced += y_ph != hyp
        out_records.append(UtteranceRecord(id=record.id, ref=record.ref, hyp=" ".join(y_ph)))

    _write_output(dump_corpus(out_records), cfg.out)
    print_info(f"{replaced}/{len(out_records)} hypotheses changed")
    _check_failures(failures, cfg)
    return EXIT_OK


def cmd_replace_logit(args: argparse.Namespace) -> int:
    """Mask low-confidence words at a fixed bar."""
    cfg = CliConfig.from_args(args)
    bar = check_bar(args.bar)
    print_header("Confidence-bar Replacement")
    records, failures = load_corpus_lenient(cfg.input, cfg.normalizer)

    out_records: list[UtteranceRecord] = []
    masked = total = 0
    for record in sorted(records, key=lambda r: r.id):
        try:
            hyp = confident_hyp(record, cfg.normalizer)
        except RasError as e:
            failures.append(RowFailure(record.id, str(e)))
            continue
        masked += len(mask_report(hyp, bar))
        total += len(hyp)
        out_records.append(
            UtteranceRecord(id=record.id, ref=record.ref, hyp=" ".join(logit_replace(hyp, bar)))
        )

    _write_output(dump_corpus(out_records), cfg.out)
    print_info(f"bar={bar}: masked {masked}/{total} words")
    _check_failures(failures, cfg)
    return EXIT_OK


def cmd_sweep_bar(args: argparse.Namespace) -> int:
    """Find the confidence bar that maximizes micro RAS."""
    cfg = CliConfig.from_args(args)
    grid = parse_bar_grid(args.bar_grid)
    print_header("Confidence-bar Sweep")
    records, failures = load_corpus_lenient(cfg.input, cfg.normalizer)

    corpus, ids = [], []
    for record in sorted(records, key=lambda r: r.id):
        try:
            corpus.append((cfg.normalizer.tokenize(record.ref), confident_hyp(record, cfg.normalizer)))
            ids.append(record.id)
        except RasError as e:
            failures.append(RowFailure(record.id, str(e)))
    _check_failures(failures, cfg)

    result = sweep_bar(corpus, cfg.alpha, grid, ids=ids)
    if cfg.fmt is ReportFormat.TSV:
        lines = ["bar\tras"] + [f"{b:.6f}\t{r:.6f}" for b, r in result.curve]
        text = "\n".join(lines) + "\n"
    else:
        text = _dump_json({"alpha": round_value(cfg.alpha), **result.to_dict(round_value)})
    _write_output(text, cfg.out)
    print_success(f"Best bar {result.best_bar:.2f} (micro RAS {result.best_ras:.6f})")
    return EXIT_OK


def cmd_gen_synth_prefs(args: argparse.Namespace) -> int:
    """Write synthetic preference records with a known alpha."""
    cfg = CliConfig.from_args(args)
    alpha_true = check_alpha(args.alpha_true)
    if not 0.0 <= args.tie_rate < 1.0:
        raise UsageError(f"--tie-rate must lie in [0, 1), got {args.tie_rate}")
    if args.n_items < 1 or args.votes < 1:
        raise UsageError("--n-items and --votes must be positive")
    records = generate_preferences(
        args.n_items, args.votes, alpha_true, args.tie_rate, seed=cfg.seed
    )
    _write_output(dump_preferences(records), cfg.out)
    print_info(f"{len(records)} items, alpha_true={alpha_true}, seed={cfg.seed}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    """Run the reward service until interrupted."""
    from src.reward_service import ServiceSettings, serve

    cfg = CliConfig.from_args(args)
    try:
        settings = ServiceSettings(
            host=args.host,
            port=args.port,
            default_alpha=cfg.alpha,
            max_batch_items=args.max_batch_items,
            tokenize=cfg.tokenize,
            lowercase=cfg.lowercase,
            strip_punct=cfg.strip_punct,
        )
    except ValidationError as e:
        raise UsageError(str(e.errors()[0]["msg"])) from e
    print_info(f"RAS reward service {VERSION} on {settings.host}:{settings.port}")
    serve(settings)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_input(p: argparse.ArgumentParser, what: str) -> None:
    p.add_argument("input", type=Path, help=f"{what} (line-delimited JSON, UTF-8)")


def _add_alpha(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--alpha", type=float, default=DEFAULT_ALPHA,
        help=f"Abstention cost factor in (0, 1) (default: {DEFAULT_ALPHA})",
    )


def _add_text_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--tokenize", choices=[m.value for m in TokenizeMode], default=TokenizeMode.WHITESPACE.value,
        help="Word splitting: whitespace, or mixed-cjk to split CJK characters (default: whitespace)",
    )
    p.add_argument("--lowercase", action="store_true", help="Lowercase words before scoring")
    p.add_argument("--strip-punct", action="store_true", help="Remove punctuation from words")


def _add_output(p: argparse.ArgumentParser, formats: Sequence[str] = ()) -> None:
    p.add_argument("--out", type=Path, default=None, help="Output file (default: stdout)")
    if formats:
        p.add_argument(
            "--format", choices=list(formats), default=formats[0],
            help=f"Output format (default: {formats[0]})",
        )


def _add_strict(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strict", action="store_true", help="Exit with code 2 if any row fails")


def build_parser() -> argparse.ArgumentParser:
    """Build the CLI argument parser."""
    parser = CliParser(
        prog="ras",
        description="Abstention-aware ASR evaluation: RAS scoring, alpha calibration, PH targets",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # score
    p = subparsers.add_parser("score", help="Score a corpus of {id, ref, hyp} rows")
    _add_input(p, "Corpus")
    _add_alpha(p)
    _add_text_options(p)
    _add_strict(p)
    _add_output(p, ("doc", "tsv", "md"))
    p.add_argument(
        "--scatter-alpha", type=float, action="append", metavar="ALPHA",
        help="Add a WER/RAS scatter series at this alpha (repeatable)",
    )
    p.set_defaults(func=cmd_score)

    # calibrate
    p = subparsers.add_parser("calibrate", help="Fit alpha to preference records")
    _add_input(p, "Preference records {id, ref, hyp_a, hyp_b, k_a, k_b, k_c}")
    p.add_argument(
        "--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA,
        help=f"Weight of the tie regularizer, >= 0 (default: {DEFAULT_LAMBDA})",
    )
    _add_text_options(p)
    _add_output(p, ("doc", "md"))
    p.set_defaults(func=cmd_calibrate)

    # make-ph
    p = subparsers.add_parser("make-ph", help="Build GT-guided placeholder targets")
    _add_input(p, "Corpus")
    p.add_argument(
        "--token-table", type=Path, default=None,
        help="JSON object {segment: token count} (default: one placeholder per word)",
    )
    _add_text_options(p)
    _add_strict(p)
    _add_output(p)
    p.set_defaults(func=cmd_make_ph)

    # replace-logit
    p = subparsers.add_parser("replace-logit", help="Mask words whose confidence is below a bar")
    _add_input(p, "Corpus with confidences")
    p.add_argument(
        "--bar", type=float, default=DEFAULT_BAR,
        help=f"Confidence bar in [0, 1] (default: {DEFAULT_BAR})",
    )
    _add_text_options(p)
    _add_strict(p)
    _add_output(p)
    p.set_defaults(func=cmd_replace_logit)

    # sweep-bar
    start, stop, step = DEFAULT_BAR_GRID
    p = subparsers.add_parser("sweep-bar", help="Pick the confidence bar with the best micro RAS")
    _add_input(p, "Corpus with confidences")
    _add_alpha(p)
    p.add_argument(
        "--bar-grid", default=f"{start}:{stop}:{step}",
        help=f"START:STOP:STEP or comma list (default: {start}:{stop}:{step})",
    )
    _add_text_options(p)
    _add_strict(p)
    _add_output(p, ("doc", "tsv"))
    p.set_defaults(func=cmd_sweep_bar)

    # serve
    p = subparsers.add_parser("serve", help="Run the reward HTTP service")
    p.add_argument("--host", default=SERVICE_HOST, help=f"Bind address (default: {SERVICE_HOST})")
    p.add_argument("--port", type=int, default=SERVICE_PORT, help=f"Port (default: {SERVICE_PORT})")
    p.add_argument(
        "--max-batch-items", type=int, default=MAX_BATCH_ITEMS,
        help=f"Largest accepted score batch (default: {MAX_BATCH_ITEMS})",
    )
    _add_alpha(p)
    _add_text_options(p)
    p.set_defaults(func=cmd_serve)

    # gen-synth-prefs
    p = subparsers.add_parser("gen-synth-prefs", help="Generate synthetic preference records")
    p.add_argument("--n-items", type=int, default=200, help="Number of items (default: 200)")
    p.add_argument("--votes", type=int, default=25, help="Subjects per item (default: 25)")
    p.add_argument("--alpha-true", type=float, default=0.5, help="Alpha behind the votes (default: 0.5)")
    p.add_argument("--tie-rate", type=float, default=0.05, help="Chance of an indifferent vote (default: 0.05)")
    p.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    _add_output(p)
    p.set_defaults(func=cmd_gen_synth_prefs)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )

    try:
        return args.func(args)
    except (UsageError, InvalidAlphaError, InvalidLambdaError, BarOutOfRangeError, EmptyGridError) as e:
        print_error(str(e))
        return EXIT_USAGE
    except (DataError, RasError, OSError, UnicodeDecodeError) as e:
        print_error(str(e))
        return EXIT_DATA
    except Exception:
        logger.exception("Internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

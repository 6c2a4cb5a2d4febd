"""Tests for the ras command-line interface."""

import json

import pytest

from src.cli import build_parser, main
from src.config import EXIT_DATA, EXIT_OK, EXIT_USAGE, FIXTURES_DIR
from src.corpus import load_corpus, load_preferences

SUBCOMMANDS = ["score", "calibrate", "make-ph", "replace-logit", "sweep-bar", "gen-synth-prefs", "serve"]


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.jsonl"
    rows = [
        {"id": "u1", "ref": "a b c", "hyp": "a <ph> c"},
        {"id": "u2", "ref": "a b", "hyp": "x b"},
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

class TestExitCodes:
    def test_alpha_out_of_range(self, corpus_file):
        assert main(["score", str(corpus_file), "--alpha", "1.5"]) == EXIT_USAGE

    def test_missing_input(self, tmp_path):
        assert main(["score", str(tmp_path / "absent.jsonl")]) == EXIT_USAGE

    def test_unknown_flag(self, corpus_file):
        with pytest.raises(SystemExit) as exc:
            main(["score", str(corpus_file), "--bogus"])
        assert exc.value.code == EXIT_USAGE

    def test_invalid_row_is_reported_not_fatal(self, tmp_path, capsys):
        path = tmp_path / "mixed.jsonl"
        path.write_text(
            '{"id": "good", "ref": "a b", "hyp": "a b"}\n'
            '{"id": "bad", "ref": "", "hyp": "a"}\n'
            '{"id": "good", "ref": "c", "hyp": "c"}\n'
            '{not json\n',
            encoding="utf-8",
        )
        assert main(["score", str(path)]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert [r["id"] for r in doc["per_utterance"]] == ["good"]
        assert [f["id"] for f in doc["failures"]] == ["bad", "good", "line:4"]
        assert "line 2" in doc["failures"][0]["error"]

        assert main(["score", str(path), "--strict"]) == EXIT_DATA

    def test_bad_confidence_row_skipped_by_replace_logit(self, tmp_path):
        path = tmp_path / "conf.jsonl"
        out = tmp_path / "masked.jsonl"
        path.write_text(
            '{"id": "ok", "ref": "a b", "hyp": "a x", "confidences": [0.9, 0.1]}\n'
            '{"id": "short", "ref": "a b", "hyp": "a x", "confidences": [0.9]}\n',
            encoding="utf-8",
        )
        assert main(["replace-logit", str(path), "--bar", "0.2", "--out", str(out)]) == EXIT_OK
        assert [r.hyp for r in load_corpus(out)] == ["a <ph>"]
        assert main(["replace-logit", str(path), "--strict"]) == EXIT_DATA

    def test_only_invalid_rows(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "u1", "ref": "", "hyp": "a"}\n', encoding="utf-8")
        assert main(["score", str(path)]) == EXIT_DATA

    def test_strict_turns_row_failures_into_data_error(self, corpus_file):
        # make-ph cannot align a hypothesis that already has placeholders
        assert main(["make-ph", str(corpus_file)]) == EXIT_OK
        assert main(["make-ph", str(corpus_file), "--strict"]) == EXIT_DATA

    def test_bar_out_of_range(self):
        path = FIXTURES_DIR / "confident_corpus.jsonl"
        assert main(["replace-logit", str(path), "--bar", "1.5"]) == EXIT_USAGE

    def test_negative_lambda(self):
        assert main(["calibrate", str(FIXTURES_DIR / "preferences.jsonl"), "--lambda", "-1"]) == EXIT_USAGE

    @pytest.mark.parametrize("command", SUBCOMMANDS)
    def test_help(self, command, capsys):
        with pytest.raises(SystemExit) as exc:
            main([command, "--help"])
        assert exc.value.code == 0
        assert command in capsys.readouterr().out

    def test_subcommand_required(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args([])
        assert exc.value.code == EXIT_USAGE


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

class TestScore:
    def test_doc_to_stdout(self, corpus_file, capsys):
        assert main(["score", str(corpus_file), "--alpha", "0.5"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["alpha"] == 0.5
        assert [r["ras"] for r in doc["per_utterance"]] == [0.5, 0.0]

    def test_tsv_file(self, corpus_file, tmp_path):
        out = tmp_path / "scores.tsv"
        assert main(["score", str(corpus_file), "--format", "tsv", "--out", str(out)]) == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("id\tras")
        assert lines[2].startswith("u2\t0.000000")

    def test_md_is_stable(self, corpus_file, tmp_path):
        a, b = tmp_path / "a.md", tmp_path / "b.md"
        main(["score", str(corpus_file), "--format", "md", "--out", str(a)])
        main(["score", str(corpus_file), "--format", "md", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestPlaceholderCommands:
    def test_make_ph_reproduces_golden(self, tmp_path):
        out = tmp_path / "ph.jsonl"
        code = main([
            "make-ph", str(FIXTURES_DIR / "golden_corpus.jsonl"),
            "--token-table", str(FIXTURES_DIR / "golden_token_counts.json"),
            "--out", str(out),
        ])
        assert code == EXIT_OK
        assert load_corpus(out) == load_corpus(FIXTURES_DIR / "golden_ph.jsonl")

    def test_missing_token_table(self, tmp_path):
        code = main([
            "make-ph", str(FIXTURES_DIR / "golden_corpus.jsonl"),
            "--token-table", str(tmp_path / "none.json"),
        ])
        assert code == EXIT_USAGE

    def test_replace_logit(self, tmp_path):
        out = tmp_path / "masked.jsonl"
        code = main(["replace-logit", str(FIXTURES_DIR / "confident_corpus.jsonl"), "--bar", "0.2", "--out", str(out)])
        assert code == EXIT_OK
        hyps = {r.id: r.hyp for r in load_corpus(out)}
        assert hyps == {
            "c1": "a <ph> d",
            "c2": "the meeting stars at noon",
            "c3": "budget review <ph> week",
        }

    def test_sweep_bar(self, capsys):
        code = main(["sweep-bar", str(FIXTURES_DIR / "confident_corpus.jsonl"), "--bar-grid", "0.0,0.2,0.5"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert [p["bar"] for p in doc["curve"]] == [0.0, 0.2, 0.5]
        assert doc["best_bar"] == 0.5

    def test_bad_bar_grid(self):
        path = str(FIXTURES_DIR / "confident_corpus.jsonl")
        assert main(["sweep-bar", path, "--bar-grid", "a:b:c"]) == EXIT_USAGE
        assert main(["sweep-bar", path, "--bar-grid", "0.5:0.1:0.1"]) == EXIT_USAGE


class TestCalibrationCommands:
    def test_calibrate(self, capsys):
        assert main(["calibrate", str(FIXTURES_DIR / "preferences.jsonl")]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert 0.01 <= doc["alpha_star"] <= 0.99
        assert doc["n_records"] == 4
        assert doc["lambda"] == 0.1

    def test_calibrate_markdown(self, tmp_path):
        out = tmp_path / "alpha.md"
        assert main(["calibrate", str(FIXTURES_DIR / "preferences.jsonl"), "--format", "md", "--out", str(out)]) == EXIT_OK
        assert "alpha" in out.read_text(encoding="utf-8")

    def test_gen_synth_prefs_is_seeded(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            assert main(["gen-synth-prefs", "--n-items", "5", "--votes", "10", "--seed", "7", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        records = load_preferences(a)
        assert len(records) == 5
        assert all(r.s == 10 for r in records)

    def test_gen_synth_prefs_default_seed_is_fixed(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            assert main(["gen-synth-prefs", "--n-items", "5", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_gen_synth_prefs_bad_tie_rate(self):
        assert main(["gen-synth-prefs", "--tie-rate", "1.0"]) == EXIT_USAGE

"""Corpus files, document serialization, and the two CLI subcommands."""

import json
import subprocess
import sys

import pytest

from asralign import align_text
from asralign.alignment import CoverageError
from asralign.beamalign import AlignConfig
from asralign.cli import main
from asralign.corpus import (
    CorpusFormatError,
    document_from_alignment,
    document_from_json,
    document_to_json,
    load_corpus,
    render_alignment,
)

WORKED_REF = "some things are worth noting"
WORKED_HYP = "something worth nothing period"


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def _jsonl_corpus(tmp_path, rows, name="corpus.jsonl"):
    lines = [json.dumps(row) for row in rows]
    return _write(tmp_path / name, "\n".join(lines) + "\n")


def _worked_doc(method="beam", cfg=None):
    cfg = cfg or AlignConfig()
    alignment = align_text(WORKED_REF, WORKED_HYP, cfg)
    return document_from_alignment("t1", method, cfg, alignment, timing_ms=1.25)


# --- corpus loading ---

def test_load_jsonl_corpus(tmp_path):
    path = _jsonl_corpus(tmp_path, [
        {"id": "a", "ref": "one", "hyp": "won"},
        {"id": "b", "ref": "two", "hyp": "two"},
    ])
    records = load_corpus(path)
    assert [(r.id, r.ref, r.hyp) for r in records] == [
        ("a", "one", "won"), ("b", "two", "two")]


def test_load_jsonl_skips_blank_lines(tmp_path):
    path = _write(tmp_path / "c.jsonl",
                  '{"id": "a", "ref": "x", "hyp": "y"}\n\n'
                  '{"id": "b", "ref": "p", "hyp": "q"}\n')
    assert [r.id for r in load_corpus(path)] == ["a", "b"]


def test_load_jsonl_reports_the_malformed_line(tmp_path):
    path = _write(tmp_path / "c.jsonl",
                  '{"id": "a", "ref": "x", "hyp": "y"}\n{oops\n')
    with pytest.raises(CorpusFormatError, match=r"c\.jsonl:2: malformed JSON"):
        load_corpus(path)


def test_load_jsonl_rejects_missing_fields_and_bad_types(tmp_path):
    with pytest.raises(CorpusFormatError, match=r":1: missing fields \['hyp'\]"):
        load_corpus(_write(tmp_path / "m.jsonl", '{"id": "a", "ref": "x"}\n'))
    with pytest.raises(CorpusFormatError, match="must be strings"):
        load_corpus(_write(tmp_path / "t.jsonl",
                           '{"id": 1, "ref": "x", "hyp": "y"}\n'))
    with pytest.raises(CorpusFormatError, match="expected an object"):
        load_corpus(_write(tmp_path / "l.jsonl", '[1, 2]\n'))


def test_load_jsonl_rejects_duplicate_ids(tmp_path):
    path = _jsonl_corpus(tmp_path, [
        {"id": "a", "ref": "x", "hyp": "y"},
        {"id": "a", "ref": "p", "hyp": "q"},
    ])
    with pytest.raises(CorpusFormatError, match="duplicate id 'a'"):
        load_corpus(path)


def test_load_empty_corpus_warns(tmp_path):
    path = _write(tmp_path / "empty.jsonl", "")
    with pytest.warns(UserWarning, match="empty corpus"):
        assert load_corpus(path) == []


def test_load_parallel_text(tmp_path):
    ref = _write(tmp_path / "ref.txt", "one\ntwo\nthree\n")
    hyp = _write(tmp_path / "hyp.txt", "won\ntoo\nthree\n")
    records = load_corpus([ref, hyp], fmt="parallel-text")
    assert [r.id for r in records] == ["1", "2", "3"]
    assert records[1].hyp == "too"


def test_parallel_text_ids_are_zero_padded(tmp_path):
    ref = _write(tmp_path / "ref.txt", "\n".join(f"r {i}" for i in range(12)) + "\n")
    hyp = _write(tmp_path / "hyp.txt", "\n".join(f"h {i}" for i in range(12)) + "\n")
    records = load_corpus([ref, hyp], fmt="parallel-text")
    assert records[0].id == "01" and records[-1].id == "12"


def test_parallel_text_length_mismatch_names_both_counts(tmp_path):
    ref = _write(tmp_path / "ref.txt", "a\nb\nc\n")
    hyp = _write(tmp_path / "hyp.txt", "a\nb\nc\nd\n")
    with pytest.raises(CorpusFormatError, match="has 3 lines.*has 4"):
        load_corpus([ref, hyp], fmt="parallel-text")


def test_load_corpus_path_validation(tmp_path):
    real = _jsonl_corpus(tmp_path, [{"id": "a", "ref": "x", "hyp": "y"}])
    with pytest.raises(CorpusFormatError, match="not a readable file"):
        load_corpus(tmp_path / "missing.jsonl")
    with pytest.raises(CorpusFormatError, match="exactly one file"):
        load_corpus([real, real])
    with pytest.raises(CorpusFormatError, match="exactly two files"):
        load_corpus([real], fmt="parallel-text")
    with pytest.raises(CorpusFormatError, match="unknown corpus format"):
        load_corpus([real], fmt="csv")


# --- document rendering ---

def test_json_rendering_is_canonical_and_round_trips():
    doc = _worked_doc()
    rendered = render_alignment(doc, style="json")
    assert "\n" not in rendered
    assert rendered == json.dumps(document_to_json(doc), ensure_ascii=False,
                                  sort_keys=True, separators=(",", ":"))
    assert document_from_json(json.loads(rendered)) == doc


def test_tsv_rendering_has_header_and_one_row_per_segment():
    doc = _worked_doc()
    lines = render_alignment(doc, style="tsv").split("\n")
    assert lines[0] == "pairId\top\trefText\thypText\tcost"
    assert len(lines) == 1 + len(doc.segments)
    assert lines[1].split("\t") == ["t1", "SUB", "some", "some#", "2"]


def test_pretty_rendering_shows_the_three_band_rows():
    doc = _worked_doc()
    lines = render_alignment(doc, style="pretty").split("\n")
    assert lines[0].startswith("pair t1  method beam  cost 0.485714")
    assert len(lines) == 4
    ops = [c.strip() for c in lines[2].strip("|").split("|")]
    assert ops == ["SUB", "SUB", "DEL", "MATCH", "SUB", "INS"]
    refs = [c.strip() for c in lines[1].strip("|").split("|")]
    assert refs == ["some", "things", "are", "worth", "noting", ""]


def test_pretty_rendering_of_an_empty_alignment_is_just_the_header():
    cfg = AlignConfig()
    doc = document_from_alignment("none", "beam", cfg,
                                  align_text("", "", cfg), timing_ms=0.1)
    assert render_alignment(doc, style="pretty") == "pair none  method beam  cost 0.000000"


def test_render_rejects_unknown_styles():
    with pytest.raises(ValueError, match="unknown style"):
        render_alignment(_worked_doc(), style="xml")


# --- align subcommand ---

def test_cli_align_inline_pretty(capsys):
    assert main(["align", "--ref", WORKED_REF, "--hyp", WORKED_HYP]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("pair inline  method beam")
    assert len(lines) == 4


def test_cli_align_json_fields(capsys):
    assert main(["align", "--ref", WORKED_REF, "--hyp", WORKED_HYP,
                 "--style", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pairId"] == "inline"
    assert doc["cost"] == 34 and doc["denominator"] == 70
    assert [s["op"] for s in doc["segments"]] == [
        "SUB", "SUB", "DEL", "MATCH", "SUB", "INS"]
    assert doc["config"]["beamSize"] == 100
    assert doc["timingMs"] > 0


def test_cli_align_other_methods(capsys):
    assert main(["align", "--ref", WORKED_REF, "--hyp", WORKED_HYP,
                 "--method", "lwa", "--style", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "lwa" and doc["cost"] == 5
    assert doc["config"] == {"method": "lwa"}
    assert main(["align", "--ref", WORKED_REF, "--hyp", WORKED_HYP,
                 "--method", "owa", "--style", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["cost"] == 23


def test_cli_align_flags_reach_the_config(capsys):
    assert main(["align", "--ref", "ab", "--hyp", "ab", "--style", "json",
                 "--beam-size", "7", "--no-substitution-penalty",
                 "--unit-cost", "--restrict-backtrace", "--vowels", "ae"]) == 0
    config = json.loads(capsys.readouterr().out)["config"]
    assert config == {
        "method": "beam",
        "beamSize": 7,
        "substitutionPenalty": False,
        "unitCostTransitions": True,
        "restrictToBacktrace": True,
        "vowels": "ae",
    }


def test_cli_align_corpus_tsv_has_a_single_header(tmp_path, capsys):
    corpus = _jsonl_corpus(tmp_path, [
        {"id": "a", "ref": "one two", "hyp": "one too"},
        {"id": "b", "ref": "three", "hyp": "three"},
    ])
    assert main(["align", "--corpus", corpus, "--style", "tsv"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert sum(line.startswith("pairId") for line in lines) == 1
    assert {line.split("\t")[0] for line in lines[1:]} == {"a", "b"}


def test_cli_align_output_file(tmp_path, capsys):
    out_path = tmp_path / "result.txt"
    assert main(["align", "--ref", "a", "--hyp", "a",
                 "--output", str(out_path)]) == 0
    assert capsys.readouterr().out == ""
    assert out_path.read_text(encoding="utf-8").startswith("pair inline")


def test_cli_align_usage_errors(tmp_path, capsys):
    assert main(["align", "--ref", "only one side"]) == 1
    assert "error" in capsys.readouterr().err
    corpus = _jsonl_corpus(tmp_path, [{"id": "a", "ref": "x", "hyp": "y"}])
    assert main(["align", "--corpus", corpus, "--ref", "x", "--hyp", "y"]) == 1
    assert "not both" in capsys.readouterr().err
    assert main(["align", "--ref", "a", "--hyp", "b", "--style", "yaml"]) == 1
    assert main(["align", "--ref", "a", "--hyp", "b", "--beam-size", "0"]) == 1
    assert main(["nonsense"]) == 1


def test_cli_align_missing_corpus_file_is_an_input_error(capsys):
    assert main(["align", "--corpus", "/nonexistent/corpus.jsonl"]) == 1
    assert "not a readable file" in capsys.readouterr().err


def test_cli_aligned_documents_are_stable_apart_from_timing(capsys):
    argv = ["align", "--ref", WORKED_REF, "--hyp", WORKED_HYP, "--style", "json"]
    assert main(argv) == 0
    first = json.loads(capsys.readouterr().out)
    assert main(argv) == 0
    second = json.loads(capsys.readouterr().out)
    first.pop("timingMs"), second.pop("timingMs")
    assert first == second


# --- eval subcommand ---

def _small_corpus(tmp_path):
    return _jsonl_corpus(tmp_path, [
        {"id": "1", "ref": "some things are worth noting",
         "hyp": "something worth nothing period"},
        {"id": "2", "ref": "water under the bridge", "hyp": "water under bridge"},
        {"id": "3", "ref": "clean pair", "hyp": "clean pair"},
        {"id": "4", "ref": "a be", "hyp": ""},
    ])


def test_cli_eval_prints_gle_and_wer(tmp_path, capsys):
    corpus = _small_corpus(tmp_path)
    assert main(["eval", "--corpus", corpus, "--workers", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("GLE[beam] = ")
    assert "WER = " in out


def test_cli_eval_reports_methods_in_request_order(tmp_path, capsys):
    corpus = _small_corpus(tmp_path)
    assert main(["eval", "--corpus", corpus, "--methods", "owa,beam,lwa",
                 "--workers", "1"]) == 0
    out = capsys.readouterr().out
    idx = [out.index(f"GLE[{m}]") for m in ("owa", "beam", "lwa")]
    assert idx == sorted(idx)


def test_cli_eval_permutation_of_a_method_with_itself(tmp_path, capsys):
    corpus = _small_corpus(tmp_path)
    assert main(["eval", "--corpus", corpus, "--methods", "beam,lwa",
                 "--permutation-test", "beam,beam", "--resamples", "200",
                 "--workers", "1"]) == 0
    out = capsys.readouterr().out
    assert "permutation beam vs beam: p = 1.000000" in out


def test_cli_eval_report_schema(tmp_path, capsys):
    corpus = _small_corpus(tmp_path)
    report_path = tmp_path / "report.json"
    assert main(["eval", "--corpus", corpus, "--methods", "beam,lwa",
                 "--permutation-test", "beam,lwa", "--resamples", "500",
                 "--report", str(report_path), "--workers", "1"]) == 0
    capsys.readouterr()
    payload = json.loads(report_path.read_text(encoding="utf-8"))
    assert set(payload) == {"corpus", "format", "config", "methods", "wer",
                            "permutationTest"}
    assert payload["format"] == "jsonl"
    assert payload["config"]["method"] == "beam"
    beam = payload["methods"]["beam"]
    num = sum(p["globalNumerator"] for p in beam["perPair"])
    den = sum(p["localDenominator"] for p in beam["perPair"])
    assert beam["gle"] == pytest.approx(num / den)
    assert [p["pairId"] for p in beam["perPair"]] == ["1", "2", "3", "4"]
    assert payload["permutationTest"]["methods"] == ["beam", "lwa"]
    assert 0 < payload["permutationTest"]["pValue"] <= 1
    assert "timing" not in json.dumps(payload).lower()


def test_cli_eval_reports_are_byte_identical_across_runs_and_workers(tmp_path):
    corpus = _small_corpus(tmp_path)
    blobs = []
    for tag, workers in (("a", "1"), ("b", "1"), ("c", "2")):
        report = tmp_path / f"report-{tag}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "asralign.cli", "eval", "--corpus", corpus,
             "--methods", "beam,owa", "--permutation-test", "beam,owa",
             "--resamples", "300", "--report", str(report),
             "--workers", workers],
            capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0, proc.stderr
        blobs.append(report.read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_cli_eval_usage_errors(tmp_path, capsys):
    corpus = _small_corpus(tmp_path)
    assert main(["eval", "--methods", "beam"]) == 1
    assert "--corpus is required" in capsys.readouterr().err
    assert main(["eval", "--corpus", corpus, "--methods", ""]) == 1
    assert main(["eval", "--corpus", corpus, "--methods", "beam,magic"]) == 1
    assert "unknown method 'magic'" in capsys.readouterr().err
    assert main(["eval", "--corpus", corpus, "--permutation-test", "beam"]) == 1
    assert main(["eval", "--corpus", corpus, "--methods", "beam",
                 "--permutation-test", "beam,lwa"]) == 1
    assert "not in --methods" in capsys.readouterr().err


def test_cli_invariant_violations_exit_two(tmp_path, capsys, monkeypatch):
    import asralign.cli as cli

    def broken(method, cfg, ref_t, hyp_t):
        raise CoverageError("fabricated tiling failure")

    monkeypatch.setattr(cli, "_run_method", broken)
    corpus = _small_corpus(tmp_path)
    assert main(["eval", "--corpus", corpus, "--workers", "1"]) == 2
    assert "invariant violation" in capsys.readouterr().err
    assert main(["align", "--ref", "a", "--hyp", "b"]) == 2

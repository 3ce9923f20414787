"""Corpus loading and alignment-document serialization.

Two corpus layouts: JSONL (one {"id", "ref", "hyp"} object per line, the
primary format) and parallel text (two files, line i of each forming
pair i, with zero-padded line numbers as ids). Alignment results
serialize to documents that round-trip losslessly through JSON.
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .alignment import Alignment, Segment
from .beamalign import AlignConfig

JSONL = "jsonl"
PARALLEL_TEXT = "parallel-text"
FORMATS = (JSONL, PARALLEL_TEXT)


class CorpusFormatError(ValueError):
    """A corpus file is unreadable or malformed."""


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    ref: str
    hyp: str


@dataclass(frozen=True)
class AlignmentDocument:
    pair_id: str
    method: str
    config: dict
    segments: tuple
    cost: int
    denominator: int
    total_cost: float
    timing_ms: float
    notes: tuple = ()


def _pad_ids(count: int):
    width = len(str(count))
    return [str(i + 1).zfill(width) for i in range(count)]


def _load_jsonl(path: Path):
    records = []
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"{path}:{lineno}: malformed JSON: {err}") from err
            if not isinstance(obj, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected an object")
            missing = {"id", "ref", "hyp"} - obj.keys()
            if missing:
                raise CorpusFormatError(f"{path}:{lineno}: missing fields {sorted(missing)}")
            if not all(isinstance(obj[k], str) for k in ("id", "ref", "hyp")):
                raise CorpusFormatError(f"{path}:{lineno}: id, ref and hyp must be strings")
            if obj["id"] in seen:
                raise CorpusFormatError(f"{path}:{lineno}: duplicate id {obj['id']!r}")
            seen.add(obj["id"])
            records.append(CorpusRecord(id=obj["id"], ref=obj["ref"], hyp=obj["hyp"]))
    if not records:
        warnings.warn(f"{path}: empty corpus")
    return records


def _load_parallel(ref_path: Path, hyp_path: Path):
    with open(ref_path, encoding="utf-8") as handle:
        ref_lines = handle.read().splitlines()
    with open(hyp_path, encoding="utf-8") as handle:
        hyp_lines = handle.read().splitlines()
    if len(ref_lines) != len(hyp_lines):
        raise CorpusFormatError(
            f"parallel files differ in length: {ref_path} has {len(ref_lines)} "
            f"lines, {hyp_path} has {len(hyp_lines)}")
    ids = _pad_ids(len(ref_lines))
    records = [CorpusRecord(id=i, ref=r, hyp=h)
               for i, r, h in zip(ids, ref_lines, hyp_lines)]
    if not records:
        warnings.warn(f"{ref_path}: empty corpus")
    return records


def load_corpus(paths, fmt: str = JSONL):
    """Read a corpus; paths is one file for jsonl, two for parallel-text."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    paths = [Path(p) for p in paths]
    for p in paths:
        if not p.is_file():
            raise CorpusFormatError(f"{p}: not a readable file")
    if fmt == JSONL:
        if len(paths) != 1:
            raise CorpusFormatError("jsonl format takes exactly one file")
        return _load_jsonl(paths[0])
    if fmt == PARALLEL_TEXT:
        if len(paths) != 2:
            raise CorpusFormatError(
                "parallel-text format takes exactly two files: reference, hypothesis")
        return _load_parallel(*paths)
    raise CorpusFormatError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")


def config_snapshot(cfg: AlignConfig, method: str) -> dict:
    snap = {"method": method}
    if method == "beam":
        snap.update({
            "beamSize": cfg.beam_size,
            "substitutionPenalty": cfg.substitution_penalty,
            "unitCostTransitions": cfg.unit_cost_transitions,
            "restrictToBacktrace": cfg.restrict_to_backtrace,
            "vowels": "".join(sorted(cfg.vowels)),
        })
    return snap


def document_from_alignment(
    pair_id: str,
    method: str,
    cfg: AlignConfig,
    alignment: Alignment,
    timing_ms: float,
) -> AlignmentDocument:
    return AlignmentDocument(
        pair_id=pair_id,
        method=method,
        config=config_snapshot(cfg, method),
        segments=alignment.segments,
        cost=alignment.cost,
        denominator=alignment.denominator,
        total_cost=alignment.cost / alignment.denominator,
        timing_ms=timing_ms,
        notes=alignment.notes,
    )


def _segment_to_json(seg: Segment) -> dict:
    return {
        "op": seg.op,
        "refTokenIndex": seg.ref_token_index,
        "refText": seg.ref_text,
        "hypText": seg.hyp_text,
        "cost": seg.cost,
        "refCharSpan": list(seg.ref_char_span),
        "hypCharSpan": list(seg.hyp_char_span),
        "refSourceSpan": list(seg.ref_source_span),
        "hypSourceSpan": list(seg.hyp_source_span),
    }


def _segment_from_json(obj: dict) -> Segment:
    return Segment(
        op=obj["op"],
        ref_token_index=obj["refTokenIndex"],
        ref_text=obj["refText"],
        hyp_text=obj["hypText"],
        cost=obj["cost"],
        ref_char_span=tuple(obj["refCharSpan"]),
        hyp_char_span=tuple(obj["hypCharSpan"]),
        ref_source_span=tuple(obj["refSourceSpan"]),
        hyp_source_span=tuple(obj["hypSourceSpan"]),
    )


def document_to_json(doc: AlignmentDocument) -> dict:
    return {
        "pairId": doc.pair_id,
        "method": doc.method,
        "config": dict(doc.config),
        "segments": [_segment_to_json(s) for s in doc.segments],
        "cost": doc.cost,
        "denominator": doc.denominator,
        "totalCost": doc.total_cost,
        "timingMs": doc.timing_ms,
        "notes": list(doc.notes),
    }


def document_from_json(obj: dict) -> AlignmentDocument:
    return AlignmentDocument(
        pair_id=obj["pairId"],
        method=obj["method"],
        config=dict(obj["config"]),
        segments=tuple(_segment_from_json(s) for s in obj["segments"]),
        cost=obj["cost"],
        denominator=obj["denominator"],
        total_cost=obj["totalCost"],
        timing_ms=obj["timingMs"],
        notes=tuple(obj["notes"]),
    )


def render_alignment(doc: AlignmentDocument, style: str = "pretty") -> str:
    """Render one document as pretty columns, TSV rows, or JSON."""
    if style == "json":
        # canonical form: sorted keys, no whitespace, one line per document
        return json.dumps(document_to_json(doc), ensure_ascii=False,
                          sort_keys=True, separators=(",", ":"))
    if style == "tsv":
        lines = ["pairId\top\trefText\thypText\tcost"]
        lines += [
            f"{doc.pair_id}\t{s.op}\t{s.ref_text}\t{s.hyp_text}\t{s.cost}"
            for s in doc.segments
        ]
        return "\n".join(lines)
    if style == "pretty":
        header = (f"pair {doc.pair_id}  method {doc.method}  "
                  f"cost {doc.total_cost:.6f}")
        if not doc.segments:
            return header
        widths = [max(len(s.ref_text), len(s.op), len(s.hyp_text))
                  for s in doc.segments]
        def row(cells):
            return "|" + "|".join(c.ljust(w) for c, w in zip(cells, widths)) + "|"
        return "\n".join([
            header,
            row([s.ref_text for s in doc.segments]),
            row([s.op for s in doc.segments]),
            row([s.hyp_text for s in doc.segments]),
        ])
    raise ValueError(f"unknown style {style!r}; expected pretty, tsv or json")


class Stopwatch:
    """Wall-clock millisecond timer for per-pair alignment timing."""

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed_ms = (time.perf_counter() - self._start) * 1000.0
        return False

"""Command-line surface.

Two subcommands: `align` writes one alignment document per pair in the
chosen style; `eval` scores one or more aligners over a corpus and can
attach a paired permutation test and a JSON report.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .alignment import CoverageError
from .baselines import lwa_align, owa_align
from .beamalign import AlignConfig, align
from .corpus import (
    FORMATS,
    JSONL,
    AlignmentDocument,
    CorpusFormatError,
    CorpusRecord,
    Stopwatch,
    config_snapshot,
    document_from_alignment,
    load_corpus,
    render_alignment,
)
from .metrics import GleReport, PairEvaluation, evaluate_pair, permutation_test, wer
from .preprocess import normalize

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2
METHODS = ("beam", "lwa", "owa")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the contract here reserves 2 for
    # invariant violations, so route usage problems through exit 1.
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="asralign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_align_flags(p):
        p.add_argument("--method", choices=METHODS, default="beam")
        p.add_argument("--beam-size", type=int, default=100)
        p.add_argument("--no-substitution-penalty", action="store_true",
                       help="score open segments once even when both axes moved")
        p.add_argument("--unit-cost", action="store_true",
                       help="flatten all allowed non-match steps to cost 1")
        p.add_argument("--restrict-backtrace", action="store_true",
                       help="forbid leaving the optimal-path band instead of charging +1")
        p.add_argument("--vowels", default="aeiou",
                       help="characters classified as vowels (default: aeiou)")

    def add_corpus_flags(p):
        p.add_argument("--corpus", nargs="+", metavar="PATH",
                       help="corpus file; two files (ref hyp) for parallel-text")
        p.add_argument("--format", choices=FORMATS, default=JSONL)

    p_align = sub.add_parser("align", help="align one pair or a corpus")
    p_align.add_argument("--ref", help="inline reference transcript")
    p_align.add_argument("--hyp", help="inline hypothesis transcript")
    add_corpus_flags(p_align)
    add_align_flags(p_align)
    p_align.add_argument("--output", help="write here instead of stdout")
    p_align.add_argument("--style", choices=("pretty", "tsv", "json"),
                         default="pretty")

    p_eval = sub.add_parser("eval", help="score aligners over a corpus")
    add_corpus_flags(p_eval)
    p_eval.add_argument("--methods", default="beam",
                        help="comma-separated subset of: " + ",".join(METHODS))
    add_align_flags(p_eval)
    p_eval.add_argument("--permutation-test", metavar="A,B",
                        help="paired permutation test between two methods")
    p_eval.add_argument("--resamples", type=int, default=10_000)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--report", metavar="PATH", help="write a JSON report here")
    p_eval.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="parallel alignment workers (default: all cores)")
    return parser


def _config_from_args(args) -> AlignConfig:
    cfg = AlignConfig(
        beam_size=args.beam_size,
        substitution_penalty=not args.no_substitution_penalty,
        unit_cost_transitions=args.unit_cost,
        restrict_to_backtrace=args.restrict_backtrace,
        vowels=frozenset(args.vowels),
    )
    cfg.classifier  # validates the vowel set before any work happens
    return cfg


def _run_method(method: str, cfg: AlignConfig, ref_t, hyp_t):
    if method == "beam":
        return align(ref_t, hyp_t, cfg)
    if method == "lwa":
        return lwa_align(ref_t, hyp_t)
    if method == "owa":
        return owa_align(ref_t, hyp_t)
    raise _UsageError(f"unknown method {method!r}; expected one of {METHODS}")


def _records_for_align(args):
    if args.corpus and (args.ref is not None or args.hyp is not None):
        raise _UsageError("give either --ref/--hyp or --corpus, not both")
    if args.corpus:
        return load_corpus(args.corpus, args.format)
    if args.ref is None or args.hyp is None:
        raise _UsageError("both --ref and --hyp are required without --corpus")
    return [CorpusRecord(id="inline", ref=args.ref, hyp=args.hyp)]


def _cmd_align(args) -> int:
    cfg = _config_from_args(args)
    records = _records_for_align(args)
    chunks = []
    for position, record in enumerate(records):
        ref_t, hyp_t = normalize(record.ref), normalize(record.hyp)
        with Stopwatch() as clock:
            alignment = _run_method(args.method, cfg, ref_t, hyp_t)
        doc = document_from_alignment(record.id, args.method, cfg,
                                      alignment, clock.elapsed_ms)
        rendered = render_alignment(doc, args.style)
        if args.style == "tsv" and position > 0:
            rendered = "\n".join(rendered.split("\n")[1:])  # one header total
        chunks.append(rendered)
    joiner = "\n\n" if args.style == "pretty" and len(chunks) > 1 else "\n"
    text = joiner.join(chunks) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _evaluate_record(task):
    """Per-pair work unit: align with every method and score each result."""
    record, methods, cfg = task
    ref_t, hyp_t = normalize(record.ref), normalize(record.hyp)
    row = {}
    for method in methods:
        with Stopwatch() as clock:
            alignment = _run_method(method, cfg, ref_t, hyp_t)
        evaluation = evaluate_pair(record.id, alignment)
        row[method] = (evaluation, clock.elapsed_ms)
    dropped = dict(ref_t.dropped)
    for ch, n in hyp_t.dropped.items():
        dropped[ch] = dropped.get(ch, 0) + n
    return record.id, row, (ref_t.words, hyp_t.words), dropped


def _evaluation_to_json(e: PairEvaluation) -> dict:
    return {
        "pairId": e.pair_id,
        "globalNumerator": e.global_numerator,
        "localDenominator": e.local_denominator,
        "opCounts": dict(sorted(e.op_counts.items())),
    }


def _report_to_json(report: GleReport) -> dict:
    return {
        "method": report.method,
        "gle": report.gle,
        "perPair": [_evaluation_to_json(e) for e in report.per_pair],
        "diagnostics": report.diagnostics,
    }


def _cmd_eval(args) -> int:
    cfg = _config_from_args(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise _UsageError("--methods must name at least one method")
    for m in methods:
        if m not in METHODS:
            raise _UsageError(f"unknown method {m!r}; expected one of {METHODS}")
    test_pair = None
    if args.permutation_test:
        parts = [p.strip() for p in args.permutation_test.split(",")]
        if len(parts) != 2:
            raise _UsageError("--permutation-test takes exactly two method names: A,B")
        for m in parts:
            if m not in methods:
                raise _UsageError(f"--permutation-test method {m!r} not in --methods")
        test_pair = tuple(parts)
    if not args.corpus:
        raise _UsageError("--corpus is required")
    records = load_corpus(args.corpus, args.format)

    tasks = [(record, tuple(methods), cfg) for record in records]
    if args.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_evaluate_record, tasks, chunksize=8))
    else:
        rows = [_evaluate_record(t) for t in tasks]

    dropped_total: dict = {}
    word_pairs = []
    for _, _, words, dropped in rows:
        word_pairs.append(words)
        for ch, n in dropped.items():
            dropped_total[ch] = dropped_total.get(ch, 0) + n

    reports = {}
    for method in methods:
        evaluations = tuple(row[1][method][0] for row in rows)
        total_ms = sum(row[1][method][1] for row in rows)
        num = sum(e.global_numerator for e in evaluations)
        den = sum(e.local_denominator for e in evaluations)
        reports[method] = GleReport(
            method=method,
            per_pair=evaluations,
            gle=1.0 if den == 0 else num / den,
            diagnostics={"droppedChars": dict(sorted(dropped_total.items()))},
        )
        print(f"GLE[{method}] = {reports[method].gle:.6f}  ({num}/{den}, "
              f"{len(evaluations)} pairs)")
        print(f"aligned {len(evaluations)} pairs with {method} "
              f"in {total_ms / 1000.0:.2f}s", file=sys.stderr)

    corpus_wer = wer(word_pairs)
    print("WER = " + ("n/a" if corpus_wer is None else f"{corpus_wer:.6f}"))

    test_result = None
    if test_pair:
        a, b = test_pair
        test_result = permutation_test(reports[a].per_pair, reports[b].per_pair,
                                       resamples=args.resamples, seed=args.seed)
        print(f"permutation {a} vs {b}: p = {test_result.p_value:.6f}  "
              f"(statistic {test_result.statistic:.6f}, "
              f"{test_result.resamples} resamples, seed {test_result.seed})")

    if args.report:
        payload = {
            "corpus": [str(p) for p in args.corpus],
            "format": args.format,
            "config": config_snapshot(cfg, "beam") if "beam" in methods else {},
            "methods": {m: _report_to_json(r) for m, r in reports.items()},
            "wer": corpus_wer,
            "permutationTest": None if test_result is None else {
                "methods": list(test_pair),
                "statistic": test_result.statistic,
                "pValue": test_result.p_value,
                "resamples": test_result.resamples,
                "seed": test_result.seed,
            },
        }
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False, sort_keys=True, indent=2)
            handle.write("\n")

    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "align":
            return _cmd_align(args)
        return _cmd_eval(args)
    except _UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"asralign: error: {err}", file=sys.stderr)
        return EXIT_INPUT
    # CoverageError subclasses ValueError; it must be matched first
    except (CoverageError, AssertionError) as err:
        print(f"asralign: invariant violation: {err}", file=sys.stderr)
        return EXIT_INVARIANT
    except (CorpusFormatError, FileNotFoundError, ValueError) as err:
        print(f"asralign: error: {err}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()

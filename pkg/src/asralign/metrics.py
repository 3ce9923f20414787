"""Alignment-quality metrics.

The headline number is GLE: the ratio of the insert/delete edit distance
over the full voiced strings (a lower bound no alignment can beat) to
the sum of per-segment distances an alignment actually incurred. 1.0
means every segment is locally as cheap as the global optimum; sloppy
segmentations inflate the denominator and drag the ratio down.

Conventional WER and a paired approximate permutation test round out the
reporting so methods can be compared with a significance statement.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .alignment import Alignment, CoverageError, validate_coverage, voiced_only
from .editgraph import ins_del_distance


def segment_distance(r: str, h: str) -> int:
    """Distance between one reference word and one hypothesis span.

    Insert/delete distance plus the length difference when both sides
    are non-empty; the extra term stops a substitution of unrelated
    material from scoring better than the insert-delete pair it stands
    for. Callers pass voiced-only strings.
    """
    d = ins_del_distance(r, h)
    if r and h:
        d += abs(len(r) - len(h))
    return d


@dataclass(frozen=True)
class PairEvaluation:
    pair_id: str
    global_numerator: int           # unbeatable edit floor for the pair
    local_denominator: int          # what the alignment actually spent
    op_counts: dict

    def __post_init__(self) -> None:
        # the global distance is a floor for any valid tiling, so this
        # can only trip on an aligner bug
        if self.global_numerator > self.local_denominator:
            raise CoverageError(
                f"pair {self.pair_id}: global distance {self.global_numerator} "
                f"exceeds segment sum {self.local_denominator}")


@dataclass(frozen=True)
class GleReport:
    method: str
    per_pair: tuple
    gle: float
    diagnostics: dict = field(default_factory=dict)


def evaluate_pair(pair_id: str, alignment: Alignment) -> PairEvaluation:
    """Score one alignment; raises CoverageError if it does not tile."""
    validate_coverage(alignment)
    numerator = ins_del_distance(alignment.ref.voiced, alignment.hyp.voiced)
    denominator = sum(
        segment_distance(voiced_only(seg.ref_text), voiced_only(seg.hyp_text))
        for seg in alignment.segments
    )
    return PairEvaluation(
        pair_id=pair_id,
        global_numerator=numerator,
        local_denominator=denominator,
        op_counts=dict(alignment.op_counts),
    )


def gle(
    alignments,
    *,
    method: str = "beam",
    pair_ids=None,
    extra_diagnostics: dict | None = None,
) -> GleReport:
    """Corpus-level GLE over a sequence of Alignment objects.

    Alignments that violate the coverage invariants are excluded from
    the sums and listed in diagnostics["coverageFailures"]; they signal
    an aligner bug, never valid output.
    """
    alignments = list(alignments)
    if pair_ids is None:
        width = len(str(len(alignments)))
        pair_ids = [str(i + 1).zfill(width) for i in range(len(alignments))]
    pair_ids = list(pair_ids)
    if len(pair_ids) != len(alignments):
        raise ValueError("pair_ids and alignments differ in length")

    per_pair = []
    failures = []
    dropped: Counter = Counter()
    for pid, alignment in zip(pair_ids, alignments):
        dropped.update(alignment.ref.dropped)
        dropped.update(alignment.hyp.dropped)
        try:
            per_pair.append(evaluate_pair(pid, alignment))
        except CoverageError as err:
            failures.append({"pairId": pid, "error": str(err)})
    num = sum(p.global_numerator for p in per_pair)
    den = sum(p.local_denominator for p in per_pair)
    value = 1.0 if den == 0 else num / den
    diagnostics = dict(extra_diagnostics or {})
    diagnostics["droppedChars"] = dict(sorted(dropped.items()))
    if failures:
        diagnostics["coverageFailures"] = failures
    return GleReport(method=method, per_pair=tuple(per_pair), gle=value,
                     diagnostics=diagnostics)


def _word_levenshtein(ref_words, hyp_words) -> int:
    prev = list(range(len(hyp_words) + 1))
    for i, r in enumerate(ref_words, start=1):
        cur = [i] + [0] * len(hyp_words)
        for j, h in enumerate(hyp_words, start=1):
            cur[j] = min(
                prev[j - 1] + (r != h),
                prev[j] + 1,
                cur[j - 1] + 1,
            )
        prev = cur
    return prev[-1]


def wer(pairs) -> float | None:
    """Standard word error rate over (ref_words, hyp_words) pairs.

    None when the corpus has no reference words at all.
    """
    errors = 0
    ref_len = 0
    for ref_words, hyp_words in pairs:
        errors += _word_levenshtein(tuple(ref_words), tuple(hyp_words))
        ref_len += len(ref_words)
    if ref_len == 0:
        return None
    return errors / ref_len


@dataclass(frozen=True)
class PermutationResult:
    statistic: float                # observed gleA - gleB
    p_value: float
    resamples: int
    seed: int


def _ratio(num: np.ndarray, den: np.ndarray):
    return np.where(den == 0, 1.0, num / np.where(den == 0, 1, den))


def permutation_test(
    per_pair_a,
    per_pair_b,
    resamples: int = 10_000,
    seed: int = 0,
) -> PermutationResult:
    """Paired approximate permutation test on two GLE evaluations.

    Per resample, each pair's (numerator, denominator) contribution is
    swapped between the two methods with probability one half and the
    GLE difference recomputed; the two-sided p-value counts resampled
    statistics at least as extreme as the observed one.
    """
    a = list(per_pair_a)
    b = list(per_pair_b)
    if len(a) != len(b):
        raise ValueError(f"paired test needs equal lengths, got {len(a)} and {len(b)}")
    if [p.pair_id for p in a] != [p.pair_id for p in b]:
        raise ValueError("paired test needs the same pairs in the same order")
    if resamples < 1:
        raise ValueError("resamples must be positive")

    num_a = np.array([p.global_numerator for p in a], dtype=np.int64)
    den_a = np.array([p.local_denominator for p in a], dtype=np.int64)
    num_b = np.array([p.global_numerator for p in b], dtype=np.int64)
    den_b = np.array([p.local_denominator for p in b], dtype=np.int64)

    def stat(na, da, nb, db):
        ra = 1.0 if da == 0 else na / da
        rb = 1.0 if db == 0 else nb / db
        return ra - rb

    observed = stat(num_a.sum(), den_a.sum(), num_b.sum(), den_b.sum())

    rng = np.random.default_rng(seed)
    swap = rng.random((resamples, len(a))) < 0.5
    # sum with swapped contributions, via the swap-delta to keep one temp
    sum_na = num_a.sum() + (swap * (num_b - num_a)).sum(axis=1)
    sum_da = den_a.sum() + (swap * (den_b - den_a)).sum(axis=1)
    sum_nb = num_b.sum() + (swap * (num_a - num_b)).sum(axis=1)
    sum_db = den_b.sum() + (swap * (den_a - den_b)).sum(axis=1)
    stats = _ratio(sum_na, sum_da) - _ratio(sum_nb, sum_db)
    hits = int(np.count_nonzero(np.abs(stats) >= abs(observed)))
    p = (1 + hits) / (1 + resamples)
    return PermutationResult(statistic=observed, p_value=p,
                             resamples=resamples, seed=seed)

"""Word-level baseline aligners.

Both treat whole tokens as atoms and produce strictly one-to-one
alignments in the shared Alignment shape, so the same metrics run on
them unchanged. lwa_align is the classical unit-cost Levenshtein
alignment; owa_align swaps in the metric's own segment distance as the
DP cost, making it the best any one-to-one word alignment can score.
"""

from __future__ import annotations

from .alignment import Alignment, make_segment, token_char_span, voiced_only
from .metrics import segment_distance
from .preprocess import NormalizedTranscript

_DIAG, _DEL, _INS = 0, 1, 2


def _word_dp(ref_words, hyp_words, sub_cost, del_cost, ins_cost):
    """Wagner-Fischer over words with caller-supplied cost functions."""
    rows = [[0] * (len(hyp_words) + 1) for _ in range(len(ref_words) + 1)]
    for j, h in enumerate(hyp_words, start=1):
        rows[0][j] = rows[0][j - 1] + ins_cost(h)
    for i, r in enumerate(ref_words, start=1):
        rows[i][0] = rows[i - 1][0] + del_cost(r)
        for j, h in enumerate(hyp_words, start=1):
            rows[i][j] = min(
                rows[i - 1][j - 1] + sub_cost(r, h),
                rows[i - 1][j] + del_cost(r),
                rows[i][j - 1] + ins_cost(h),
            )
    return rows


def _backtrace(rows, ref_words, hyp_words, sub_cost, del_cost, ins_cost):
    """One optimal path, preferring DIAG, then deletion, then insertion."""
    ops = []
    i, j = len(ref_words), len(hyp_words)
    while (i, j) != (0, 0):
        here = rows[i][j]
        if i > 0 and j > 0 and rows[i - 1][j - 1] + sub_cost(ref_words[i - 1], hyp_words[j - 1]) == here:
            ops.append(_DIAG)
            i, j = i - 1, j - 1
        elif i > 0 and rows[i - 1][j] + del_cost(ref_words[i - 1]) == here:
            ops.append(_DEL)
            i -= 1
        else:
            assert j > 0 and rows[i][j - 1] + ins_cost(hyp_words[j - 1]) == here
            ops.append(_INS)
            j -= 1
    ops.reverse()
    return ops


def _one_to_one(ref, hyp, sub_cost, del_cost, ins_cost):
    ref_words, hyp_words = ref.words, hyp.words
    rows = _word_dp(ref_words, hyp_words, sub_cost, del_cost, ins_cost)
    ops = _backtrace(rows, ref_words, hyp_words, sub_cost, del_cost, ins_cost)

    segments = []
    i = j = 0
    ref_pos = hyp_pos = 0
    for op in ops:
        if op == _DIAG:
            ref_span = token_char_span(ref, i)
            hyp_span = token_char_span(hyp, j)
            cost = sub_cost(ref_words[i], hyp_words[j])
            i, j = i + 1, j + 1
        elif op == _DEL:
            ref_span = token_char_span(ref, i)
            hyp_span = (hyp_pos, hyp_pos)
            cost = del_cost(ref_words[i])
            i += 1
        else:
            ref_span = (ref_pos, ref_pos)
            hyp_span = token_char_span(hyp, j)
            cost = ins_cost(hyp_words[j])
            j += 1
        segments.append(make_segment(ref, hyp, ref_span, hyp_span, cost))
        ref_pos, hyp_pos = ref_span[1], hyp_span[1]
    return Alignment(ref=ref, hyp=hyp, segments=tuple(segments),
                     cost=rows[-1][-1], denominator=1)


def lwa_align(ref: NormalizedTranscript, hyp: NormalizedTranscript) -> Alignment:
    """Unit-cost word Levenshtein alignment (ties broken deterministically).

    Any optimal path is admissible for comparison purposes; this one is
    fixed for reproducibility.
    """
    return _one_to_one(
        ref, hyp,
        sub_cost=lambda r, h: int(r != h),
        del_cost=lambda r: 1,
        ins_cost=lambda h: 1,
    )


def owa_align(ref: NormalizedTranscript, hyp: NormalizedTranscript) -> Alignment:
    """One-to-one alignment minimizing the metric's own segment distance.

    Costs are computed on voiced characters only, matching how segments
    are scored afterwards; a deleted or inserted word costs its voiced
    length.
    """
    return _one_to_one(
        ref, hyp,
        sub_cost=lambda r, h: segment_distance(voiced_only(r), voiced_only(h)),
        del_cost=lambda r: len(voiced_only(r)),
        ins_cost=lambda h: len(voiced_only(h)),
    )


def count_optimal_paths(ref_words, hyp_words) -> int:
    """Number of distinct minimum-cost unit-Levenshtein alignment paths.

    Exact counts (Python integers; these grow combinatorially).
    """
    ref_words, hyp_words = tuple(ref_words), tuple(hyp_words)
    dist = _word_dp(ref_words, hyp_words,
                    lambda r, h: int(r != h), lambda r: 1, lambda h: 1)
    counts = [[0] * (len(hyp_words) + 1) for _ in range(len(ref_words) + 1)]
    counts[0][0] = 1
    for i in range(len(ref_words) + 1):
        for j in range(len(hyp_words) + 1):
            if i == j == 0:
                continue
            total = 0
            if i > 0 and j > 0:
                sub = int(ref_words[i - 1] != hyp_words[j - 1])
                if dist[i - 1][j - 1] + sub == dist[i][j]:
                    total += counts[i - 1][j - 1]
            if i > 0 and dist[i - 1][j] + 1 == dist[i][j]:
                total += counts[i - 1][j]
            if j > 0 and dist[i][j - 1] + 1 == dist[i][j]:
                total += counts[i][j - 1]
            counts[i][j] = total
    return counts[-1][-1]

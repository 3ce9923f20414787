"""Alignment by beam search over the character edit lattice.

Paths walk the lattice between two delimited sequences. Each path keeps
the cost of its finished word-level segments (``c_closed``) apart from
the cost of the segment still being built (``c_open``), and is scored by

    (c_closed + c_open * (1 + open_is_substitution)) / (i + j + 1)

where (i, j) is the current node. Open segments that have consumed
characters on both axes count double when the substitution penalty is
on, pushing the search toward clean insert/delete splits. Steps from
nodes outside the precomputed optimal-path band pay +1, anchoring the
beam to plausible regions without forbidding detours.

Segments close when the path crosses token delimiters; see _close_point
for the three rules. The functions in this module define the semantics
one state at a time; `align` runs the same search vectorized (_engine)
and is the only entry point that scales.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import _engine
from ._engine import DIAG, HYP_ONLY, REF_ONLY
from .alignment import Alignment, make_segment, validate_coverage
from .preprocess import (
    DEFAULT_VOWELS,
    UNVOICED,
    CharClass,
    CharClassifier,
    NormalizedTranscript,
    normalize,
)
from .editgraph import EditGraph, build_graph

STEP_NAMES = {DIAG: "DIAG", REF_ONLY: "REF_ONLY", HYP_ONLY: "HYP_ONLY"}


@dataclass(frozen=True)
class AlignConfig:
    beam_size: int = 100
    substitution_penalty: bool = True
    unit_cost_transitions: bool = False
    restrict_to_backtrace: bool = False
    vowels: frozenset = DEFAULT_VOWELS

    def __post_init__(self) -> None:
        if self.beam_size < 1:
            raise ValueError("beam_size must be at least 1")

    @property
    def classifier(self) -> CharClassifier:
        return CharClassifier(frozenset(self.vowels))


@dataclass(frozen=True)
class SegmentDraft:
    ref_char_span: tuple
    hyp_char_span: tuple
    cost: int


@dataclass(frozen=True)
class PathState:
    v: tuple                        # current node (ref_pos, hyp_pos)
    u: tuple                        # end of the last closed segment
    c_closed: int
    c_open: int
    segments: tuple = ()
    op_trace: tuple = ()


ROOT = PathState(v=(0, 0), u=(0, 0), c_closed=0, c_open=0)


def transition_cost(step, ref_char, hyp_char, classifier, cfg):
    """Cost of one lattice edge, or None where the edge does not exist.

    Equal characters step diagonally for free. Unequal diagonals are a
    substitution: forbidden if either side is unvoiced, 2 within a
    phonemic class, 3 across. Single-axis steps cost 1 for unvoiced and
    2 for voiced characters. The unit-cost ablation flattens every
    allowed non-match to 1.
    """
    if step == DIAG:
        if ref_char == hyp_char:
            return 0
        a, b = classifier.classify(ref_char), classifier.classify(hyp_char)
        if a is CharClass.UNVOICED or b is CharClass.UNVOICED:
            return None
        if cfg.unit_cost_transitions:
            return 1
        return 2 if a is b else 3
    consumed = ref_char if step == REF_ONLY else hyp_char
    if cfg.unit_cost_transitions:
        return 1
    return 1 if consumed in UNVOICED else 2


def _open_multiplier(v, u, cfg) -> int:
    if cfg.substitution_penalty and v[0] > u[0] and v[1] > u[1]:
        return 2
    return 1


def score(state: PathState, cfg: AlignConfig) -> Fraction:
    """Normalized path cost; exact arithmetic so ties are real ties."""
    numerator = state.c_closed + state.c_open * _open_multiplier(state.v, state.u, cfg)
    return Fraction(numerator, state.v[0] + state.v[1] + 1)


def _close_point(step, ref_char, hyp_char, w, v, u):
    """Where this step closes the open segment, or None.

    (a) consuming the reference `>` always closes, at the step target;
    (b) consuming the reference `<` with material pending since u closes
        the pending hypothesis-only run at the step source;
    (c) a hypothesis-only step over `>` with the reference axis parked
        since u closes a whole inserted word, at the step target.
    """
    if step != HYP_ONLY:
        if ref_char == ">":
            return v
        if ref_char == "<" and w != u:
            return w
        return None
    if hyp_char == ">" and w[0] == u[0] and w != u:
        return v
    return None


def expand(state: PathState, graph: EditGraph, cfg: AlignConfig):
    """All successor states of one path, in DIAG, REF_ONLY, HYP_ONLY order."""
    ref_d, hyp_d = graph.ref_chars, graph.hyp_chars
    i, j = state.v
    assert (i, j) != (len(ref_d), len(hyp_d)), "must not expand a finished state"
    classifier = cfg.classifier
    out = []
    for step in (DIAG, REF_ONLY, HYP_ONLY):
        takes_ref = step != HYP_ONLY
        takes_hyp = step != REF_ONLY
        if takes_ref and i == len(ref_d):
            continue
        if takes_hyp and j == len(hyp_d):
            continue
        ref_char = ref_d[i] if takes_ref else None
        hyp_char = hyp_d[j] if takes_hyp else None
        t = transition_cost(step, ref_char, hyp_char, classifier, cfg)
        if t is None:
            continue
        v2 = (i + takes_ref, j + takes_hyp)
        if cfg.restrict_to_backtrace:
            if not (graph.in_backtrace[i, j] and graph.in_backtrace[v2]):
                continue
            deviation = 0
        else:
            deviation = 0 if graph.in_backtrace[i, j] else 1
        c_open = state.c_open + t + deviation
        closed_at = _close_point(step, ref_char, hyp_char, (i, j), v2, state.u)
        trace = state.op_trace + (step,)
        if closed_at is None:
            out.append(replace(state, v=v2, c_open=c_open, op_trace=trace))
            continue
        committed = c_open * _open_multiplier(closed_at, state.u, cfg)
        draft = SegmentDraft(
            ref_char_span=(state.u[0], closed_at[0]),
            hyp_char_span=(state.u[1], closed_at[1]),
            cost=committed,
        )
        out.append(PathState(
            v=v2,
            u=closed_at,
            c_closed=state.c_closed + committed,
            c_open=0,
            segments=state.segments + (draft,),
            op_trace=trace,
        ))
    return tuple(out)


def _class_codes(chars: str, classifier: CharClassifier) -> np.ndarray:
    order = {CharClass.UNVOICED: 0, CharClass.VOWEL: 1, CharClass.CONSONANT: 2}
    return np.array([order[classifier.classify(c)] for c in chars], dtype=np.int64)


def align(
    ref: NormalizedTranscript,
    hyp: NormalizedTranscript,
    cfg: AlignConfig | None = None,
) -> Alignment:
    """Best word-to-segment alignment of hyp against ref under cfg."""
    cfg = cfg or AlignConfig()
    ref_d, hyp_d = ref.delimited, hyp.delimited
    denominator = len(ref_d) + len(hyp_d) + 1
    if not ref_d and not hyp_d:
        return Alignment(ref=ref, hyp=hyp, segments=(), cost=0,
                         denominator=denominator)
    graph = build_graph(ref_d, hyp_d)
    classifier = cfg.classifier
    ref_cls = _class_codes(ref_d, classifier)
    hyp_cls = _class_codes(hyp_d, classifier)

    notes = ()
    found = _engine.run_beam(
        ref_d, hyp_d, ref_cls, hyp_cls, graph.in_backtrace,
        beam_size=cfg.beam_size,
        substitution_penalty=cfg.substitution_penalty,
        unit_cost=cfg.unit_cost_transitions,
        restrict=cfg.restrict_to_backtrace,
    )
    if found is None:
        # Only the band restriction can strand every path; realign free.
        found = _engine.run_beam(
            ref_d, hyp_d, ref_cls, hyp_cls, graph.in_backtrace,
            beam_size=cfg.beam_size,
            substitution_penalty=cfg.substitution_penalty,
            unit_cost=cfg.unit_cost_transitions,
            restrict=False,
        )
        notes = ("restricted search found no complete path; "
                 "realigned without the backtrace restriction",)
        assert found is not None, "unrestricted search cannot strand"
    cost, drafts = found
    segments = tuple(
        make_segment(ref, hyp, ref_span, hyp_span, seg_cost)
        for ref_span, hyp_span, seg_cost in drafts
    )
    result = Alignment(ref=ref, hyp=hyp, segments=segments, cost=cost,
                       denominator=denominator, notes=notes)
    validate_coverage(result)
    return result


def align_text(
    ref_text: str,
    hyp_text: str,
    cfg: AlignConfig | None = None,
    folds=None,
) -> Alignment:
    """Normalize two raw strings and align them."""
    return align(normalize(ref_text, folds=folds),
                 normalize(hyp_text, folds=folds), cfg)


def phrase_groups(alignment: Alignment) -> tuple:
    """Runs of adjacent SUB segments drawn from a single hypothesis token.

    A split word ("some#"/"#thing" both cut from "something") shows up as
    one group of segment indices; the underlying segments are unchanged.
    Only groups of two or more segments are reported.
    """
    token_of = alignment.hyp.token_of_char
    groups, run, run_token = [], [], None
    for pos, seg in enumerate(alignment.segments):
        a, b = seg.hyp_char_span
        tokens = {token_of[c] for c in range(a, b)}
        token = tokens.pop() if len(tokens) == 1 else None
        if seg.op == "SUB" and token is not None:
            if token == run_token:
                run.append(pos)
                continue
            if len(run) > 1:
                groups.append(tuple(run))
            run, run_token = [pos], token
            continue
        if len(run) > 1:
            groups.append(tuple(run))
        run, run_token = [], None
    if len(run) > 1:
        groups.append(tuple(run))
    return tuple(groups)

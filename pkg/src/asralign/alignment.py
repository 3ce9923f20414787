"""Word-level alignment data model shared by all aligners.

An alignment tiles both transcripts with segments. Each segment pairs at
most one reference token with a contiguous (possibly empty) slice of the
hypothesis, labeled MATCH, SUB, DEL or INS. Aligners only produce the
character spans; text extraction, op labeling and the coverage checks
live here so every aligner is validated the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .preprocess import DELIMITERS, PLACEHOLDER, UNVOICED, NormalizedTranscript

MATCH = "MATCH"
SUB = "SUB"
INS = "INS"
DEL = "DEL"
OPS = frozenset({MATCH, SUB, INS, DEL})


class CoverageError(ValueError):
    """An alignment fails to tile its pair of transcripts."""


@dataclass(frozen=True)
class Segment:
    op: str
    ref_token_index: int | None     # None for INS
    ref_text: str                   # normalized token chars, "" for INS
    hyp_text: str                   # extracted hyp slice with cut markers
    cost: int                       # committed cost of this segment
    ref_char_span: tuple            # half-open, into delimited reference
    hyp_char_span: tuple            # half-open, into delimited hypothesis
    ref_source_span: tuple          # half-open, into the raw reference text
    hyp_source_span: tuple          # half-open, into the raw hypothesis text


@dataclass(frozen=True)
class Alignment:
    ref: NormalizedTranscript
    hyp: NormalizedTranscript
    segments: tuple
    cost: int                       # committed numerator of the final score
    denominator: int                # |delimited ref| + |delimited hyp| + 1
    notes: tuple = field(default_factory=tuple)

    @property
    def total_cost(self) -> float:
        """Normalized cost of the winning path."""
        return self.cost / self.denominator

    @property
    def op_counts(self) -> dict:
        counts = {MATCH: 0, SUB: 0, INS: 0, DEL: 0}
        for seg in self.segments:
            counts[seg.op] += 1
        return counts


def voiced_only(chars: str) -> str:
    """Drop delimiters and placeholders; what the metrics compare."""
    return "".join(c for c in chars if c not in UNVOICED)


def _cuts_word(delimited: str, pos: int) -> bool:
    # A boundary strictly between two non-delimiter characters splits a word.
    if not 0 < pos < len(delimited):
        return False
    return delimited[pos - 1] not in DELIMITERS and delimited[pos] not in DELIMITERS


def hyp_span_text(delimited: str, start: int, stop: int) -> str:
    """Extract a hypothesis slice, marking word cuts with a placeholder.

    Delimiters inside the slice vanish; a slice edge that falls inside a
    word grows a '#' on that side, so a split like "something" aligned to
    two reference words reads "some#" / "#thing".
    """
    core = "".join(c for c in delimited[start:stop] if c not in DELIMITERS)
    if not core:
        return ""
    head = PLACEHOLDER if _cuts_word(delimited, start) else ""
    tail = PLACEHOLDER if _cuts_word(delimited, stop) else ""
    return head + core + tail


def token_char_span(transcript: NormalizedTranscript, index: int) -> tuple:
    """Span of `<chars>` for one token inside the delimited sequence."""
    start = sum(len(t.chars) + 2 for t in transcript.tokens[:index])
    return (start, start + len(transcript.tokens[index].chars) + 2)


def source_span(transcript: NormalizedTranscript, start: int, stop: int) -> tuple:
    """Map a delimited-sequence span back to raw-text offsets."""
    origins = transcript.char_origin
    if start == stop:
        if start < len(origins):
            pos = origins[start]
        elif transcript.tokens:
            pos = transcript.tokens[-1].source_span[1]
        else:
            pos = 0
        return (pos, pos)
    lo = origins[start]
    # '>' carries the exclusive stop already; anything else is inclusive.
    hi = origins[stop - 1] + (0 if transcript.delimited[stop - 1] == ">" else 1)
    return (lo, hi)


def label_op(ref_text: str, hyp_text: str, has_ref_token: bool) -> str:
    if not has_ref_token:
        return INS
    if not voiced_only(hyp_text):
        return DEL
    if hyp_text == ref_text:
        return MATCH
    return SUB


def make_segment(
    ref_t: NormalizedTranscript,
    hyp_t: NormalizedTranscript,
    ref_span: tuple,
    hyp_span: tuple,
    cost: int,
) -> Segment:
    """Build a labeled segment from raw character spans."""
    ra, rb = ref_span
    if ra == rb:
        token_index = None
        ref_text = ""
    else:
        token_index = ref_t.token_of_char[ra]
        ref_text = ref_t.tokens[token_index].chars
    hyp_text = hyp_span_text(hyp_t.delimited, *hyp_span)
    return Segment(
        op=label_op(ref_text, hyp_text, token_index is not None),
        ref_token_index=token_index,
        ref_text=ref_text,
        hyp_text=hyp_text,
        cost=cost,
        ref_char_span=ref_span,
        hyp_char_span=hyp_span,
        ref_source_span=source_span(ref_t, *ref_span),
        hyp_source_span=source_span(hyp_t, *hyp_span),
    )


def validate_coverage(alignment: Alignment) -> None:
    """Check that the segments tile both transcripts; raise CoverageError.

    Enforced: every reference token appears in exactly one segment, in
    order; hypothesis spans are contiguous, monotone, and their voiced
    characters concatenate back to the full voiced hypothesis; op labels
    agree with the segment contents.
    """
    ref_t, hyp_t = alignment.ref, alignment.hyp
    expected_tokens = list(range(len(ref_t.tokens)))
    seen_tokens = [s.ref_token_index for s in alignment.segments
                   if s.ref_token_index is not None]
    if seen_tokens != expected_tokens:
        raise CoverageError(
            f"reference tokens covered {seen_tokens}, expected {expected_tokens}")

    ref_pos = hyp_pos = 0
    voiced_parts = []
    for seg in alignment.segments:
        ra, rb = seg.ref_char_span
        ha, hb = seg.hyp_char_span
        if (ra, ha) != (ref_pos, hyp_pos):
            raise CoverageError(
                f"segment spans not contiguous at ({ref_pos}, {hyp_pos}): {seg}")
        if rb < ra or hb < ha:
            raise CoverageError(f"segment spans run backwards: {seg}")
        if rb == ra and hb == ha:
            raise CoverageError(f"segment covers nothing: {seg}")
        if seg.ref_token_index is not None:
            if (ra, rb) != token_char_span(ref_t, seg.ref_token_index):
                raise CoverageError(
                    f"segment does not cover token {seg.ref_token_index} exactly: {seg}")
        if seg.op not in OPS:
            raise CoverageError(f"unknown op {seg.op!r}")
        if seg.op != label_op(seg.ref_text, seg.hyp_text, seg.ref_token_index is not None):
            raise CoverageError(f"op label disagrees with contents: {seg}")
        voiced_parts.append(voiced_only(hyp_t.delimited[ha:hb]))
        ref_pos, hyp_pos = rb, hb

    if ref_pos != len(ref_t.delimited) or hyp_pos != len(hyp_t.delimited):
        raise CoverageError(
            f"segments stop at ({ref_pos}, {hyp_pos}), not the full extent")
    if "".join(voiced_parts) != voiced_only(hyp_t.delimited):
        raise CoverageError("hypothesis voiced characters not covered exactly once")

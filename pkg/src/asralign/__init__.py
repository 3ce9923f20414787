"""Word-to-segment alignment of ASR hypotheses against reference transcripts."""

__version__ = "0.1.0"

from .preprocess import (
    CharClass,
    CharClassifier,
    NormalizedToken,
    NormalizedTranscript,
    classify,
    normalize,
)
from .editgraph import EditGraph, build_graph, ins_del_distance
from .alignment import Alignment, CoverageError, Segment, validate_coverage
from .beamalign import (
    AlignConfig,
    PathState,
    SegmentDraft,
    align,
    align_text,
    phrase_groups,
    transition_cost,
)
from .baselines import count_optimal_paths, lwa_align, owa_align
from .metrics import (
    GleReport,
    PairEvaluation,
    PermutationResult,
    evaluate_pair,
    gle,
    permutation_test,
    segment_distance,
    wer,
)
from .corpus import (
    AlignmentDocument,
    CorpusFormatError,
    CorpusRecord,
    document_from_alignment,
    document_from_json,
    document_to_json,
    load_corpus,
    render_alignment,
)

__all__ = [
    "AlignConfig",
    "Alignment",
    "AlignmentDocument",
    "CharClass",
    "CharClassifier",
    "CorpusFormatError",
    "CorpusRecord",
    "CoverageError",
    "EditGraph",
    "GleReport",
    "NormalizedToken",
    "NormalizedTranscript",
    "PairEvaluation",
    "PathState",
    "PermutationResult",
    "Segment",
    "SegmentDraft",
    "align",
    "align_text",
    "build_graph",
    "classify",
    "count_optimal_paths",
    "document_from_alignment",
    "document_from_json",
    "document_to_json",
    "evaluate_pair",
    "gle",
    "ins_del_distance",
    "load_corpus",
    "lwa_align",
    "normalize",
    "phrase_groups",
    "owa_align",
    "permutation_test",
    "render_alignment",
    "segment_distance",
    "transition_cost",
    "validate_coverage",
    "wer",
]

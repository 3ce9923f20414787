#!/usr/bin/env python3
"""Align one noisy utterance and walk through everything the result carries."""

from asralign import align_text
from asralign.beamalign import AlignConfig
from asralign.corpus import document_from_alignment, render_alignment
from asralign.metrics import evaluate_pair, gle

ref = "some things are worth noting"
hyp = "something worth nothing period"

result = align_text(ref, hyp)
doc = document_from_alignment("demo", "beam", AlignConfig(), result, timing_ms=0.0)

print("alignment, one row per reference word (plus pure insertions):")
print(render_alignment(doc, style="pretty"))
print()

# the interesting part: "some things" vs "something" splits the hypothesis
# word across two reference words, with '#' marking the cut edges
for seg in result.segments:
    print(f"  {seg.op:5s}  {seg.ref_text!r:12} {seg.hyp_text!r:12} cost {seg.cost}")

print()
print(f"total cost {result.cost} over denominator {result.denominator}")
print(f"score = {result.cost}/{result.denominator} = {result.cost / result.denominator:.6f}")

pair = evaluate_pair("demo", result)
print(f"pair-level quality: {pair.global_numerator}/{pair.local_denominator}")
print(f"corpus GLE of this single pair: {gle([result]).gle:.6f}")

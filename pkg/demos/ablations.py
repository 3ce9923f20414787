#!/usr/bin/env python3
"""What each config flag actually does to an alignment."""

from asralign import align_text
from asralign.beamalign import AlignConfig

ref = "the signal fades at morning"
hyp = "these ignal fade sat mourning"

CONFIGS = [
    ("default", AlignConfig()),
    ("no substitution penalty", AlignConfig(substitution_penalty=False)),
    ("unit-cost transitions", AlignConfig(unit_cost_transitions=True)),
    ("restricted to backtrace band", AlignConfig(restrict_to_backtrace=True)),
    ("beam of 1 (greedy)", AlignConfig(beam_size=1)),
]

for label, cfg in CONFIGS:
    result = align_text(ref, hyp, cfg)
    ops = " ".join(s.op for s in result.segments)
    print(f"{label:30s} cost {result.cost:3d}  ops: {ops}")

print()
print("segment detail under the default config:")
for seg in align_text(ref, hyp).segments:
    print(f"  {seg.op:5s} {seg.ref_text!r:10} -> {seg.hyp_text!r:10} cost {seg.cost}")

# the doubled-substitution penalty is what keeps "fade sat" from being
# glued to the wrong reference word; turn it off and watch the ops shift
without = align_text(ref, hyp, AlignConfig(substitution_penalty=False))
print()
print("without the substitution penalty:")
for seg in without.segments:
    print(f"  {seg.op:5s} {seg.ref_text!r:10} -> {seg.hyp_text!r:10} cost {seg.cost}")

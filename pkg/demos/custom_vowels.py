#!/usr/bin/env python3
"""Character classes are configurable; here is why anyone would bother.

Substituting a vowel for a vowel costs 2, a vowel for a consonant 3.
For a language (or a phoneme inventory) where 'y' behaves like a vowel,
reclassifying it makes y-for-i confusions cheaper than y-for-t ones.
"""

from asralign import align_text
from asralign.beamalign import AlignConfig

ref = "rhythm section"
hyp = "rithim section"

default = align_text(ref, hyp)
y_is_a_vowel = align_text(ref, hyp, AlignConfig(vowels=frozenset("aeiouy")))

print(f"default vowels      : cost {default.cost}")
print(f"vowels include 'y'  : cost {y_is_a_vowel.cost}")
print()

for label, result in (("default", default), ("y-as-vowel", y_is_a_vowel)):
    print(label)
    for seg in result.segments:
        print(f"  {seg.op:5s} {seg.ref_text!r:10} -> {seg.hyp_text!r:10} cost {seg.cost}")
    print()

# same mechanism from the command line:
#   python3 -m asralign.cli align --ref "rhythm section" \
#       --hyp "rithim section" --vowels aeiouy --style pretty

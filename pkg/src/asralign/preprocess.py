"""Transcript normalization.

Reference and hypothesis transcripts arrive with casing, accents and
punctuation that have nothing to do with what was spoken. Both sides are
reduced here to a shared lowercase alphabet, and every token is wrapped in
angle brackets so the character-level aligner can see word boundaries.

Three reserved characters never come out of letters or digits:

    '<' and '>'   token delimiters
    '#'           placeholder for a word-internal apostrophe or hyphen

Everything else in a normalized token is a "voiced" character (a letter or
a digit). Digits count as consonants for classification purposes.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

PLACEHOLDER = "#"
DELIMITERS = frozenset("<>")
UNVOICED = frozenset("<>#")
DEFAULT_VOWELS = frozenset("aeiou")

# Apostrophes and hyphens that may survive as '#' when they sit inside a word.
# The typographic apostrophe and the en dash are included; the em dash is not,
# it separates words.
_PLACEHOLDER_SOURCES = frozenset({"'", "’", "-", "–"})

# Letters that NFD does not decompose but that we still want in ASCII space.
# Applied after lowercasing; extend via the folds argument of normalize().
DEFAULT_FOLDS: Mapping[str, str] = {
    "ø": "o",   # o with stroke
    "ß": "ss",  # sharp s
    "æ": "ae",
    "œ": "oe",
    "ð": "d",   # eth
    "þ": "th",  # thorn
}

_TOKEN_RE = re.compile(r"\S+")


class CharClass(Enum):
    VOWEL = "vowel"
    CONSONANT = "consonant"
    UNVOICED = "unvoiced"


@dataclass(frozen=True)
class CharClassifier:
    """Split the normalized alphabet into vowels, consonants and unvoiced.

    Any character not in ``vowels`` and not one of the three reserved
    characters is a consonant; that covers digits and letters from scripts
    with no vowel/consonant notion, which is the language-agnostic default.
    """

    vowels: frozenset = DEFAULT_VOWELS

    def __post_init__(self) -> None:
        if any(len(v) != 1 for v in self.vowels):
            raise ValueError("vowels must be single characters")
        overlap = set(self.vowels) & UNVOICED
        if overlap:
            raise ValueError(f"vowels may not include reserved characters: {overlap!r}")

    def classify(self, ch: str) -> CharClass:
        if ch in UNVOICED:
            return CharClass.UNVOICED
        if ch in self.vowels:
            return CharClass.VOWEL
        return CharClass.CONSONANT


DEFAULT_CLASSIFIER = CharClassifier()


def classify(ch: str, classifier: CharClassifier = DEFAULT_CLASSIFIER) -> CharClass:
    """Class of a single normalized character."""
    return classifier.classify(ch)


@dataclass(frozen=True)
class NormalizedToken:
    surface: str                    # the raw substring this token came from
    chars: str                      # normalized characters, may contain '#'
    source_span: tuple              # (start, stop) offsets into the raw text
    char_origins: tuple             # raw offset feeding each normalized char


@dataclass(frozen=True)
class NormalizedTranscript:
    tokens: tuple
    delimited: str                  # "<tok><tok>..." over normalized chars
    token_of_char: tuple            # delimited index -> token index
    char_origin: tuple              # delimited index -> raw offset (span edge
                                    # for delimiters)
    dropped: Mapping[str, int]      # normalized chars discarded, with counts

    @property
    def words(self) -> tuple:
        return tuple(t.chars for t in self.tokens)

    @property
    def voiced(self) -> str:
        """All voiced characters in order, placeholders excluded."""
        return "".join(c for c in self.delimited if c not in UNVOICED)


def _fold_char(raw: str, folds: Mapping[str, str]) -> str:
    """Decompose, strip combining marks, lowercase, apply the fold table."""
    out = []
    for piece in unicodedata.normalize("NFD", raw):
        if unicodedata.category(piece) == "Mn":
            continue
        for low in piece.lower():
            out.append(folds.get(low, low))
    return "".join(out)


_VOICED, _CANDIDATE, _BREAK = 0, 1, 2


def _resolve(cells: list) -> list:
    """Decide '#' or drop for each apostrophe/hyphen candidate.

    A candidate survives only when the nearest non-candidate cell on each
    side is voiced. Neighbouring candidates are looked through, so "a--b"
    keeps one '#' per source character, but dropped punctuation blocks the
    scan, so a candidate at a (sub)word edge is discarded.
    """
    kinds = [k for _, _, k in cells]
    resolved = []
    for idx, (ch, off, kind) in enumerate(cells):
        if kind != _CANDIDATE:
            resolved.append((ch, off, kind))
            continue
        left = idx - 1
        while left >= 0 and kinds[left] == _CANDIDATE:
            left -= 1
        right = idx + 1
        while right < len(kinds) and kinds[right] == _CANDIDATE:
            right += 1
        flanked = (
            left >= 0 and kinds[left] == _VOICED
            and right < len(kinds) and kinds[right] == _VOICED
        )
        if flanked:
            resolved.append((PLACEHOLDER, off, _VOICED))
        else:
            resolved.append((ch, off, _BREAK))
    return resolved


def normalize(text: str, folds: Mapping[str, str] | None = None) -> NormalizedTranscript:
    """Normalize a raw transcript into delimited tokens.

    Whitespace splits the text first. Within each whitespace token, accents
    are stripped (NFD, then combining marks removed), characters are
    lowercased and folded, apostrophes and hyphens flanked by voiced
    characters become '#', and any other punctuation is dropped. A dropped
    character also splits the token, which is how "Müller—ja!" becomes the
    two tokens "muller" and "ja". Tokens left empty disappear.
    """
    fold_table = dict(DEFAULT_FOLDS)
    if folds:
        fold_table.update(folds)

    tokens = []
    dropped: dict = {}
    for match in _TOKEN_RE.finditer(text):
        cells = []
        for offset in range(match.start(), match.end()):
            raw = text[offset]
            for norm in _fold_char(raw, fold_table):
                if norm in _PLACEHOLDER_SOURCES:
                    cells.append((norm, offset, _CANDIDATE))
                    continue
                cat = unicodedata.category(norm)
                if cat.startswith("L") or cat == "Nd":
                    cells.append((norm, offset, _VOICED))
                else:
                    cells.append((norm, offset, _BREAK))

        run: list = []
        for ch, off, kind in _resolve(cells) + [(None, -1, _BREAK)]:
            if kind == _VOICED:
                run.append((ch, off))
                continue
            if ch is not None:
                dropped[ch] = dropped.get(ch, 0) + 1
            if run:
                span = (run[0][1], run[-1][1] + 1)
                tokens.append(NormalizedToken(
                    surface=text[span[0]:span[1]],
                    chars="".join(c for c, _ in run),
                    source_span=span,
                    char_origins=tuple(o for _, o in run),
                ))
                run = []

    delimited = []
    token_of_char = []
    char_origin = []
    for index, token in enumerate(tokens):
        delimited.append("<" + token.chars + ">")
        token_of_char.extend([index] * (len(token.chars) + 2))
        char_origin.append(token.source_span[0])
        char_origin.extend(token.char_origins)
        char_origin.append(token.source_span[1])

    return NormalizedTranscript(
        tokens=tuple(tokens),
        delimited="".join(delimited),
        token_of_char=tuple(token_of_char),
        char_origin=tuple(char_origin),
        dropped=dropped,
    )

"""Shared generators for randomized tests. Seeds are fixed in each test."""

import random

VOICED_ALPHABET = "abe"  # one vowel pair plus a consonant: all cost cases


def random_word(rng: random.Random, max_chars: int, alphabet: str = VOICED_ALPHABET) -> str:
    n = rng.randint(1, max_chars)
    word = "".join(rng.choice(alphabet) for _ in range(n))
    if n >= 3 and rng.random() < 0.25:
        cut = rng.randint(1, n - 1)
        word = word[:cut] + "'" + word[cut:]  # becomes '#' after normalizing
    return word


def random_text(
    rng: random.Random,
    max_words: int,
    max_chars: int,
    alphabet: str = VOICED_ALPHABET,
    allow_empty: bool = False,
) -> str:
    if allow_empty and rng.random() < 0.08:
        return ""
    count = rng.randint(1, max_words)
    return " ".join(random_word(rng, max_chars, alphabet) for _ in range(count))

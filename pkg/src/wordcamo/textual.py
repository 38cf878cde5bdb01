"""Tokenization, keyword ranking, and syllabification.

These operations decide *which* words of a text are worth camouflaging and
where a word can be split. Everything here is a pure function: same input,
same output, no global state.

Offsets are byte offsets into the UTF-8 encoding of the source string, so
records produced downstream can be consumed from any runtime that sees the
same bytes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

__all__ = [
    "Token",
    "Keyword",
    "tokenize",
    "extract_keywords",
    "keywords_from_tokens",
    "syllabify",
    "target_keyword_count",
    "target_count_from_content_words",
    "content_word_count",
    "load_stopwords",
    "default_stopwords",
    "round_half_up",
]

# Word tokens are maximal runs of Unicode letters/digits; apostrophes join a
# word only between two alphanumerics ("don't"), never at its edges.
_WORD_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")

_VOWELS = frozenset("aeiou")
# Consonant digraphs that are never split across a syllable boundary.
_DIGRAPHS = frozenset({"th", "sh", "ch", "ph", "wh", "gh", "qu"})

MIN_KEYWORD_LEN = 3


@dataclass(frozen=True)
class Token:
    """One source span: either a word or the run of non-word bytes between words."""

    text: str
    start: int  # byte offset into the UTF-8 source, inclusive
    end: int  # byte offset, exclusive
    is_word: bool


@dataclass(frozen=True)
class Keyword:
    """A ranked camouflage target pointing at one word token."""

    token_index: int
    score: float
    rank: int  # 1-based, scores non-increasing in rank


def round_half_up(x: float) -> int:
    """Round to nearest integer with .5 going up (never banker's rounding)."""
    return int(math.floor(x + 0.5))


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into an ordered, gap-free list of tokens.

    Word and non-word tokens alternate and tile the whole input, so
    concatenating every token text reproduces the source exactly.

    Raises ValueError if the string cannot be encoded as UTF-8 (lone
    surrogates), reporting the offending byte offset.
    """
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise ValueError(
            f"input is not valid UTF-8 at byte offset {exc.start}: {exc.reason}"
        ) from None

    tokens: list[Token] = []
    byte_pos = 0
    char_pos = 0

    def emit(run: str, is_word: bool) -> None:
        nonlocal byte_pos
        if not run:
            return
        width = len(run) if run.isascii() else len(run.encode("utf-8"))
        tokens.append(Token(run, byte_pos, byte_pos + width, is_word))
        byte_pos += width

    for match in _WORD_RE.finditer(text):
        emit(text[char_pos : match.start()], False)
        emit(match.group(), True)
        char_pos = match.end()
    emit(text[char_pos:], False)
    return tokens


@lru_cache(maxsize=8)
def _load_stopword_file(path: str) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a stopword list: one lowercase word per line, '#' comments allowed."""
    return _load_stopword_file(str(path))


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The bundled English stopword list."""
    ref = resources.files("wordcamo.data").joinpath("stopwords_en.txt")
    with resources.as_file(ref) as path:
        return _load_stopword_file(str(path))


def _eligible(token: Token, stopwords: frozenset[str]) -> bool:
    return (
        token.is_word
        and len(token.text) >= MIN_KEYWORD_LEN
        and token.text.lower() not in stopwords
    )


def keywords_from_tokens(
    tokens: list[Token],
    max_top_n: int,
    stopwords: frozenset[str] | None = None,
) -> list[Keyword]:
    """Rank camouflage targets among already-tokenized text.

    Scoring is co-occurrence degree divided by frequency, computed over
    phrases: maximal runs of eligible words separated only by whitespace.
    Stopwords, words shorter than three characters, and punctuation all
    terminate a phrase. Scores are aggregated per unique lowercased word;
    occurrences of equal-scored words are ordered by position.
    """
    if max_top_n < 1:
        raise ValueError(f"max_top_n must be >= 1, got {max_top_n}")
    if stopwords is None:
        stopwords = default_stopwords()

    phrases: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    for idx, tok in enumerate(tokens):
        if _eligible(tok, stopwords):
            current.append((idx, tok.text.lower()))
        elif not tok.is_word and tok.text.isspace():
            continue  # whitespace joins adjacent content words into one phrase
        elif current:
            phrases.append(current)
            current = []
    if current:
        phrases.append(current)

    freq: dict[str, int] = {}
    degree: dict[str, int] = {}
    for phrase in phrases:
        size = len(phrase)
        for _, word in phrase:
            freq[word] = freq.get(word, 0) + 1
            degree[word] = degree.get(word, 0) + size

    occurrences = [(idx, word) for phrase in phrases for idx, word in phrase]
    occurrences.sort(key=lambda iw: (-degree[iw[1]] / freq[iw[1]], tokens[iw[0]].start))

    return [
        Keyword(token_index=idx, score=degree[word] / freq[word], rank=n + 1)
        for n, (idx, word) in enumerate(occurrences[:max_top_n])
    ]


def extract_keywords(
    text: str,
    max_top_n: int,
    stopwords: frozenset[str] | None = None,
) -> list[Keyword]:
    """Tokenize ``text`` and rank its camouflage targets (see keywords_from_tokens)."""
    return keywords_from_tokens(tokenize(text), max_top_n, stopwords)


def content_word_count(
    tokens: list[Token], stopwords: frozenset[str] | None = None
) -> int:
    """Number of word tokens eligible to become keywords."""
    if stopwords is None:
        stopwords = default_stopwords()
    return sum(1 for tok in tokens if _eligible(tok, stopwords))


def target_count_from_content_words(word_ratio: float, max_top_n: int, count: int) -> int:
    """min(max_top_n, max(1, round(word_ratio * count))); zero for no content words."""
    if not 0.0 < word_ratio <= 1.0:
        raise ValueError(f"word_ratio must be in (0, 1], got {word_ratio}")
    if max_top_n < 1:
        raise ValueError(f"max_top_n must be >= 1, got {max_top_n}")
    if count == 0:
        return 0
    return min(max_top_n, max(1, round_half_up(word_ratio * count)))


def target_keyword_count(
    text: str,
    word_ratio: float,
    max_top_n: int,
    stopwords: frozenset[str] | None = None,
) -> int:
    """How many words of ``text`` should be camouflaged for a given ratio.

    Returns min(max_top_n, max(1, round(word_ratio * content_words))); zero
    when the text has no content words at all. At least one word is always
    targeted so that a "camouflaged" instance actually differs from its
    source.
    """
    count = content_word_count(tokenize(text), stopwords)
    return target_count_from_content_words(word_ratio, max_top_n, count)


def _nucleus_flags(lower: str) -> list[bool]:
    flags = []
    last = len(lower) - 1
    for i, ch in enumerate(lower):
        if ch in _VOWELS:
            flags.append(True)
        elif ch == "y":
            before = lower[i - 1] if i > 0 else ""
            after = lower[i + 1] if i < last else ""
            flags.append(before not in _VOWELS and after not in _VOWELS)
        else:
            flags.append(False)
    return flags


def _cluster_units(cluster: str) -> list[int]:
    """Lengths of consonant units in a cluster; digraphs count as one unit."""
    units = []
    i = 0
    while i < len(cluster):
        if cluster[i : i + 2] in _DIGRAPHS:
            units.append(2)
            i += 2
        else:
            units.append(1)
            i += 1
    return units


def syllabify(word: str) -> list[str]:
    """Split a single word into syllables.

    Heuristic segmentation: maximal vowel runs form nuclei ('y' counts as a
    vowel when not adjacent to one); a single consonant between nuclei
    attaches to the following syllable; longer clusters split after their
    first unit, where the digraphs th/sh/ch/ph/wh/gh/qu never split. A word
    with no nucleus is returned whole. Concatenating the result always
    reproduces the input.
    """
    if not word:
        return []
    lower = word.lower()
    flags = _nucleus_flags(lower)

    runs: list[tuple[int, int]] = []  # [start, end) of each nucleus run
    i = 0
    n = len(word)
    while i < n:
        if flags[i]:
            j = i
            while j < n and flags[j]:
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1

    if len(runs) <= 1:
        return [word]

    boundaries = []
    for (_, prev_end), (next_start, _) in zip(runs, runs[1:]):
        cluster = lower[prev_end:next_start]
        units = _cluster_units(cluster)
        if len(units) <= 1:
            boundaries.append(prev_end)
        else:
            boundaries.append(prev_end + units[0])

    pieces = []
    prev = 0
    for b in boundaries:
        pieces.append(word[prev:b])
        prev = b
    pieces.append(word[prev:])
    return pieces

"""The three word-camouflage transformations.

Every engine is a pure function of (word, spec, rng state). The exact order
in which random draws are consumed is part of each engine's contract and is
documented per function, so a seeded stream reproduces byte-identical
output anywhere.

`camouflage_word` is the dispatcher: it picks a technique, guarantees the
result differs from the input, and emits a ModificationRecord precise
enough to restore the original text byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .glyphs import GlyphTable, default_table
from .levels import INV_CAMO, LEETSPEAK, PUNCT_CAMO, ConfigError, LevelSpec
from .textual import Token, syllabify

__all__ = [
    "ModificationRecord",
    "select_method",
    "leet_transform",
    "punct_transform",
    "invert_syllables",
    "swap_syllables",
    "camouflage_word",
]


@dataclass(frozen=True)
class ModificationRecord:
    """Provenance of one camouflaged keyword, sufficient to invert it exactly.

    ``start``/``end`` are byte offsets of the original token in the
    *original* instance text.
    """

    instance_id: str
    token_index: int
    start: int
    end: int
    original: str
    replacement: str
    method: str
    level: int
    version: str

    def to_wire(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "orig": self.original,
            "repl": self.replacement,
            "method": self.method,
        }


def select_method(spec: LevelSpec, rng: np.random.Generator) -> str:
    """Choose the camouflage technique for one word.

    Draw order: one uniform for the leetspeak-vs-rest split (skipped when
    leetspeak is the only method), then one integer index when more than one
    non-leet method remains.
    """
    if not spec.methods:
        raise ConfigError("spec has no methods configured")
    if spec.methods == (LEETSPEAK,):
        return LEETSPEAK
    others = [m for m in spec.methods if m != LEETSPEAK]
    if LEETSPEAK in spec.methods and rng.random() < spec.leet_punt_prb:
        return LEETSPEAK
    if len(others) == 1:
        return others[0]
    return others[int(rng.integers(len(others)))]


def leet_transform(
    word: str,
    table: GlyphTable,
    spec: LevelSpec,
    rng: np.random.Generator,
) -> str:
    """Replace characters with visually similar glyphs.

    For each substitutable character class in order of first appearance:
    one activation draw; if activated, one uniform-style draw, then (shared
    glyph index if uniform), then one replacement draw per occurrence in
    positional order, each followed by its own glyph index draw when styles
    are independent. Case of unreplaced characters is preserved; lookups are
    case-insensitive. May return the input unchanged if no class activates.
    """
    chars = list(word)
    positions: dict[str, list[int]] = {}
    for i, ch in enumerate(word.lower()):
        if ch in table.entries:
            positions.setdefault(ch, []).append(i)
    for cls, occ in positions.items():  # insertion order = first appearance
        if rng.random() >= spec.leet_change_prb:
            continue
        options = table.entries[cls]
        uniform = rng.random() < spec.leet_uniform_change
        shared = options[int(rng.integers(len(options)))] if uniform else None
        for i in occ:
            if rng.random() < spec.leet_change_frq:
                chars[i] = shared if uniform else options[int(rng.integers(len(options)))]
    return "".join(chars)


def force_leet(word: str, table: GlyphTable, rng: np.random.Generator) -> str | None:
    """Force exactly one glyph substitution at a uniformly chosen eligible
    position; None when the word has no substitutable characters."""
    lower = word.lower()
    positions = [i for i, ch in enumerate(lower) if ch in table.entries]
    if not positions:
        return None
    pos = positions[int(rng.integers(len(positions)))]
    options = table.entries[lower[pos]]
    glyph = options[int(rng.integers(len(options)))]
    return word[:pos] + glyph + word[pos + 1 :]


def _interior_boundaries(word: str) -> list[int]:
    cuts = []
    pos = 0
    for syl in syllabify(word)[:-1]:
        pos += len(syl)
        cuts.append(pos)
    return cuts


def punct_transform(word: str, spec: LevelSpec, rng: np.random.Generator) -> str | None:
    """Insert separator symbols between characters or at syllable boundaries.

    Draw order: hyphenation-mode draw, uniform-symbol draw, (shared symbol
    index if uniform), word-splitting draw, then one symbol index per
    insertion point when symbols are independent. Hyphenation mode falls
    back to every-gap insertion for monosyllabic words. Returns None for
    words shorter than two characters (no insertion point exists).
    """
    if len(word) < 2:
        return None
    if spec.punt_hyphenate_prb is None:
        raise ConfigError(f"spec for level {spec.level} does not configure {PUNCT_CAMO}")

    if rng.random() < spec.punt_hyphenate_prb:
        points = _interior_boundaries(word)
        if not points:
            points = list(range(1, len(word)))
    else:
        points = list(range(1, len(word)))
    if not points:  # unreachable for len >= 2; forced medial insertion
        points = [len(word) // 2]

    symbols = spec.symbols
    uniform = rng.random() < spec.punt_uniform_change_prb
    shared = symbols[int(rng.integers(len(symbols)))] if uniform else None
    splitting = rng.random() < spec.punt_word_splitting_prb

    out = []
    prev = 0
    for p in points:
        out.append(word[prev:p])
        sym = shared if uniform else symbols[int(rng.integers(len(symbols)))]
        out.append(f" {sym} " if splitting else sym)
        prev = p
    out.append(word[prev:])
    return "".join(out)


def forced_insertion(word: str, spec: LevelSpec, rng: np.random.Generator) -> str:
    """Last-resort change: one separator symbol at the medial gap."""
    sym = spec.symbols[int(rng.integers(len(spec.symbols)))]
    mid = max(1, len(word) // 2)
    return word[:mid] + sym + word[mid:]


def swap_syllables(word: str, i: int, j: int) -> str:
    """Swap syllables at 1-based positions ``i`` and ``j``. An involution:
    applying the same swap twice restores the word."""
    syllables = syllabify(word)
    if not (1 <= i <= len(syllables) and 1 <= j <= len(syllables)):
        raise ValueError(f"syllable positions {i},{j} out of range for {word!r}")
    a, b = i - 1, j - 1
    syllables[a], syllables[b] = syllables[b], syllables[a]
    return "".join(syllables)


def invert_syllables(word: str, spec: LevelSpec, rng: np.random.Generator) -> str | None:
    """Swap two syllables separated by a bounded distance.

    Draw order: only-max-distance draw, (distance index draw when not at
    max), then start-position index draw. Returns None for words that do
    not split into at least two syllables.
    """
    if spec.inv_max_dist is None:
        raise ConfigError(f"spec for level {spec.level} does not configure {INV_CAMO}")
    syllables = syllabify(word)
    n = len(syllables)
    if n < 2:
        return None
    max_dist = min(spec.inv_max_dist, n - 1)
    if rng.random() < spec.inv_only_max_dist_prb:
        dist = max_dist
    else:
        dist = 1 + int(rng.integers(max_dist))
    start = int(rng.integers(n - dist))
    syllables[start], syllables[start + dist] = syllables[start + dist], syllables[start]
    return "".join(syllables)


def _apply(
    method: str,
    word: str,
    spec: LevelSpec,
    table: GlyphTable,
    rng: np.random.Generator,
) -> str | None:
    if method == LEETSPEAK:
        return leet_transform(word, table, spec, rng)
    if method == PUNCT_CAMO:
        return punct_transform(word, spec, rng)
    if method == INV_CAMO:
        return invert_syllables(word, spec, rng)
    raise ConfigError(f"unknown method {method!r}")


def camouflage_word(
    word: str,
    token: Token,
    spec: LevelSpec,
    rng: np.random.Generator,
    *,
    table: GlyphTable | None = None,
    instance_id: str = "",
    token_index: int = -1,
) -> tuple[str, ModificationRecord]:
    """Camouflage one keyword, guaranteeing the output differs from the input.

    Dispatches through select_method. If the drawn engine signals a no-op or
    returns the word unchanged, the remaining configured methods are tried
    in canonical order, then a single substitution is forced, and as a last
    resort one separator is inserted at the medial gap.
    """
    if table is None:
        table = default_table(spec.glyph_tier)

    method = select_method(spec, rng)
    result = _apply(method, word, spec, table, rng)

    if result is None or result == word:
        for fallback in spec.methods:
            if fallback == method:
                continue
            result = _apply(fallback, word, spec, table, rng)
            if result is not None and result != word:
                method = fallback
                break
        else:
            result = None

    if result is None or result == word:
        forced = force_leet(word, table, rng)
        if forced is not None:
            result, method = forced, LEETSPEAK
        else:
            result, method = forced_insertion(word, spec, rng), PUNCT_CAMO

    record = ModificationRecord(
        instance_id=instance_id,
        token_index=token_index,
        start=token.start,
        end=token.end,
        original=word,
        replacement=result,
        method=method,
        level=spec.level,
        version=spec.version,
    )
    return result, record

"""Glyph substitution tables for leetspeak camouflage.

Tables ship as a data file rather than code so deployments can swap in
their own character inventories. Tiers are cumulative: ``intermediate``
contains everything in ``basic``, ``advanced`` everything in
``intermediate``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

__all__ = ["TIERS", "GlyphTable", "GlyphTableError", "load_glyph_tables", "default_table"]

TIERS = ("basic", "intermediate", "advanced")


class GlyphTableError(ValueError):
    """Malformed glyph table file or tier request."""


@dataclass(frozen=True)
class GlyphTable:
    """Substitutions for one tier: lowercase source char -> replacement strings."""

    tier: str
    entries: dict[str, tuple[str, ...]]

    def validate(self) -> "GlyphTable":
        if self.tier not in TIERS:
            raise GlyphTableError(f"unknown tier {self.tier!r}")
        for src, repls in self.entries.items():
            if len(src) != 1 or src != src.lower():
                raise GlyphTableError(f"source must be a single lowercase char, got {src!r}")
            if not repls:
                raise GlyphTableError(f"no replacements for {src!r}")
            for r in repls:
                if not 1 <= len(r) <= 4:
                    raise GlyphTableError(f"replacement {r!r} for {src!r} must be 1-4 chars")
                if r == src:
                    raise GlyphTableError(f"replacement for {src!r} equals its source")
        return self

    def substitutable(self, word: str) -> list[str]:
        """Distinct substitutable source characters present in a word, in
        order of first appearance (case-insensitive)."""
        seen: list[str] = []
        for ch in word.lower():
            if ch in self.entries and ch not in seen:
                seen.append(ch)
        return seen


def _parse_sections(path: str) -> dict[str, list[tuple[str, tuple[str, ...]]]]:
    sections: dict[str, list[tuple[str, tuple[str, ...]]]] = {}
    current: str | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip().lower()
                if current not in TIERS:
                    raise GlyphTableError(f"{path}:{lineno}: unknown tier [{current}]")
                sections.setdefault(current, [])
                continue
            if current is None:
                raise GlyphTableError(f"{path}:{lineno}: entry before any tier section")
            src, sep, rest = line.partition(":")
            if not sep:
                raise GlyphTableError(f"{path}:{lineno}: expected 'source: repl ...'")
            repls = tuple(rest.split())
            if not repls:
                raise GlyphTableError(f"{path}:{lineno}: no replacements listed")
            sections[current].append((src.strip(), repls))
    return sections


def load_glyph_tables(path: str | Path) -> dict[str, GlyphTable]:
    """Parse a glyph table file into the three cumulative tier tables.

    Replacement lists preserve file order; re-listing a source in a higher
    tier appends to the inherited list.
    """
    sections = _parse_sections(str(path))
    tables: dict[str, GlyphTable] = {}
    entries: dict[str, tuple[str, ...]] = {}
    for tier in TIERS:
        for src, repls in sections.get(tier, []):
            entries[src] = entries.get(src, ()) + repls
        tables[tier] = GlyphTable(tier=tier, entries=dict(entries)).validate()
    return tables


@lru_cache(maxsize=1)
def _default_tables() -> dict[str, GlyphTable]:
    ref = resources.files("wordcamo.data").joinpath("glyphs_default.txt")
    with resources.as_file(ref) as path:
        return load_glyph_tables(path)


def default_table(tier: str) -> GlyphTable:
    """The bundled glyph table for a tier."""
    tables = _default_tables()
    if tier not in tables:
        raise GlyphTableError(f"unknown tier {tier!r}")
    return tables[tier]

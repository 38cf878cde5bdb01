"""Complexity-level configuration and reproducible stream derivation.

A LevelSpec bundles every probability knob of one (level, version) pair.
The canonical values for the three levels ship here; a plain INI-style file
can override any field per (level, version) section. Random streams are
derived from a (master seed, stream name, epoch) path through SHA-256, so
any stream can be re-created in isolation.
"""

from __future__ import annotations

import configparser
import hashlib
import struct
from dataclasses import dataclass, fields, replace

import numpy as np

__all__ = [
    "LEETSPEAK",
    "PUNCT_CAMO",
    "INV_CAMO",
    "METHOD_KINDS",
    "VERSIONS",
    "DEFAULT_SYMBOLS",
    "LevelSpec",
    "SeedPath",
    "ConfigError",
    "canonical_spec",
    "all_canonical_specs",
    "load_overrides",
    "apply_overrides",
    "derive_rng",
]

LEETSPEAK = "leetspeak"
PUNCT_CAMO = "punct_camo"
INV_CAMO = "inv_camo"
METHOD_KINDS = (LEETSPEAK, PUNCT_CAMO, INV_CAMO)

VERSIONS = ("v1", "v2")

# Separator symbols available to punctuation camouflage, in draw order.
DEFAULT_SYMBOLS = ("-", ".", "_", "*", "~", "'")

_WORD_RATIOS = {"v1": 0.15, "v2": 0.65}
_MAX_TOP_NS = {"v1": 5, "v2": 20}

# Fallback parameters used when an override enables a method at a level
# where the canonical configuration has no values for it.
_PUNT_DEFAULTS = (0.7, 0.95, 0.8)
_INV_DEFAULTS = (4, 0.5)


class ConfigError(ValueError):
    """Invalid level/override configuration."""


@dataclass(frozen=True)
class LevelSpec:
    """All parameters of one camouflage complexity level and version."""

    level: int
    version: str
    max_top_n: int
    word_ratio: float
    leet_punt_prb: float
    leet_change_prb: float
    leet_change_frq: float
    leet_uniform_change: float
    methods: tuple[str, ...]
    glyph_tier: str
    punt_hyphenate_prb: float | None = None
    punt_uniform_change_prb: float | None = None
    punt_word_splitting_prb: float | None = None
    inv_max_dist: int | None = None
    inv_only_max_dist_prb: float | None = None
    symbols: tuple[str, ...] = DEFAULT_SYMBOLS

    def validate(self) -> "LevelSpec":
        if self.level not in (1, 2, 3):
            raise ConfigError(f"level must be 1..3, got {self.level}")
        if self.version not in VERSIONS:
            raise ConfigError(f"version must be one of {VERSIONS}, got {self.version!r}")
        if self.max_top_n < 1:
            raise ConfigError(f"max_top_n must be >= 1, got {self.max_top_n}")
        if not 0.0 < self.word_ratio <= 1.0:
            raise ConfigError(f"word_ratio must be in (0, 1], got {self.word_ratio}")
        if not self.methods:
            raise ConfigError("methods must not be empty")
        for m in self.methods:
            if m not in METHOD_KINDS:
                raise ConfigError(f"unknown method {m!r}")
        for name in (
            "leet_punt_prb",
            "leet_change_prb",
            "leet_change_frq",
            "leet_uniform_change",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")

        punct_fields = (
            "punt_hyphenate_prb",
            "punt_uniform_change_prb",
            "punt_word_splitting_prb",
        )
        for name in punct_fields:
            value = getattr(self, name)
            if PUNCT_CAMO in self.methods:
                if value is None:
                    raise ConfigError(f"{name} required when {PUNCT_CAMO} is enabled")
                if not 0.0 <= value <= 1.0:
                    raise ConfigError(f"{name} must be in [0, 1], got {value}")
            elif value is not None:
                raise ConfigError(f"{name} set but {PUNCT_CAMO} is not enabled")

        if INV_CAMO in self.methods:
            if self.inv_max_dist is None or self.inv_only_max_dist_prb is None:
                raise ConfigError(f"inv_* parameters required when {INV_CAMO} is enabled")
            if self.inv_max_dist < 1:
                raise ConfigError(f"inv_max_dist must be >= 1, got {self.inv_max_dist}")
            if not 0.0 <= self.inv_only_max_dist_prb <= 1.0:
                raise ConfigError(
                    f"inv_only_max_dist_prb must be in [0, 1], got {self.inv_only_max_dist_prb}"
                )
        elif self.inv_max_dist is not None or self.inv_only_max_dist_prb is not None:
            raise ConfigError(f"inv_* parameters set but {INV_CAMO} is not enabled")

        if not self.symbols:
            raise ConfigError("symbols must not be empty")
        return self

    def is_canonical(self) -> bool:
        return self == canonical_spec(self.level, self.version)


def canonical_spec(level: int, version: str) -> LevelSpec:
    """The standard parameterization of a complexity level and ratio version."""
    if level not in (1, 2, 3):
        raise ConfigError(f"level must be 1..3, got {level}")
    if version not in VERSIONS:
        raise ConfigError(f"version must be one of {VERSIONS}, got {version!r}")

    base = dict(
        level=level,
        version=version,
        max_top_n=_MAX_TOP_NS[version],
        word_ratio=_WORD_RATIOS[version],
        leet_change_frq=0.8,
    )
    if level == 1:
        return LevelSpec(
            **base,
            leet_punt_prb=0.9,
            leet_change_prb=0.8,
            leet_uniform_change=0.5,
            methods=(LEETSPEAK,),
            glyph_tier="basic",
        ).validate()
    if level == 2:
        return LevelSpec(
            **base,
            leet_punt_prb=0.9,
            leet_change_prb=0.5,
            leet_uniform_change=0.6,
            methods=(LEETSPEAK, PUNCT_CAMO),
            glyph_tier="intermediate",
            punt_hyphenate_prb=0.7,
            punt_uniform_change_prb=0.95,
            punt_word_splitting_prb=0.8,
        ).validate()
    return LevelSpec(
        **base,
        leet_punt_prb=0.4,
        leet_change_prb=0.5,
        leet_uniform_change=0.6,
        methods=(LEETSPEAK, PUNCT_CAMO, INV_CAMO),
        glyph_tier="advanced",
        punt_hyphenate_prb=0.7,
        punt_uniform_change_prb=0.95,
        punt_word_splitting_prb=0.8,
        inv_max_dist=4,
        inv_only_max_dist_prb=0.5,
    ).validate()


def all_canonical_specs() -> dict[tuple[int, str], LevelSpec]:
    return {
        (level, version): canonical_spec(level, version)
        for level in (1, 2, 3)
        for version in VERSIONS
    }


_FLOAT_KEYS = {
    "word_ratio",
    "leet_punt_prb",
    "leet_change_prb",
    "leet_change_frq",
    "leet_uniform_change",
    "punt_hyphenate_prb",
    "punt_uniform_change_prb",
    "punt_word_splitting_prb",
    "inv_only_max_dist_prb",
}
_INT_KEYS = {"max_top_n", "inv_max_dist"}
_TUPLE_KEYS = {"methods", "symbols"}
_STR_KEYS = {"glyph_tier"}


def load_overrides(path: str) -> dict[tuple[int, str], dict]:
    """Parse a spec override file into per-(level, version) field overlays.

    The file uses INI sections named ``[level<N>.<version>]`` with
    ``key = value`` lines; ``methods`` and ``symbols`` take space-separated
    lists. Unknown keys, bad sections, and out-of-range values are rejected.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    overlays: dict[tuple[int, str], dict] = {}
    for section in parser.sections():
        name = section.strip().lower()
        if not (name.startswith("level") and "." in name):
            raise ConfigError(f"{path}: bad section [{section}]; expected [level<N>.<vK>]")
        level_part, _, version = name.partition(".")
        try:
            level = int(level_part.removeprefix("level"))
        except ValueError:
            raise ConfigError(f"{path}: bad level in section [{section}]") from None
        if level not in (1, 2, 3) or version not in VERSIONS:
            raise ConfigError(f"{path}: bad section [{section}]")

        overlay: dict = {}
        for key, raw in parser.items(section):
            key = key.strip().lower()
            raw = raw.strip()
            if key in _FLOAT_KEYS:
                try:
                    overlay[key] = float(raw)
                except ValueError:
                    raise ConfigError(f"{path}: {key} must be a number, got {raw!r}") from None
            elif key in _INT_KEYS:
                try:
                    overlay[key] = int(raw)
                except ValueError:
                    raise ConfigError(f"{path}: {key} must be an integer, got {raw!r}") from None
            elif key in _TUPLE_KEYS:
                overlay[key] = tuple(raw.split())
            elif key in _STR_KEYS:
                overlay[key] = raw
            else:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
        overlays[(level, version)] = overlay
    return overlays


def apply_overrides(spec: LevelSpec, overlay: dict) -> LevelSpec:
    """Overlay field values onto a spec, filling method defaults, then revalidate.

    Applying the same overlay twice is identical to applying it once.
    """
    valid = {f.name for f in fields(LevelSpec)} - {"level", "version"}
    unknown = set(overlay) - valid
    if unknown:
        raise ConfigError(f"unknown spec fields: {sorted(unknown)}")
    out = replace(spec, **overlay)
    # Enabling a method beyond the canonical set pulls in default parameters
    # unless the overlay provides them explicitly.
    if PUNCT_CAMO in out.methods and out.punt_hyphenate_prb is None:
        out = replace(
            out,
            punt_hyphenate_prb=_PUNT_DEFAULTS[0],
            punt_uniform_change_prb=_PUNT_DEFAULTS[1],
            punt_word_splitting_prb=_PUNT_DEFAULTS[2],
        )
    if PUNCT_CAMO not in out.methods:
        out = replace(
            out,
            punt_hyphenate_prb=None,
            punt_uniform_change_prb=None,
            punt_word_splitting_prb=None,
        )
    if INV_CAMO in out.methods and out.inv_max_dist is None:
        out = replace(out, inv_max_dist=_INV_DEFAULTS[0], inv_only_max_dist_prb=_INV_DEFAULTS[1])
    if INV_CAMO not in out.methods:
        out = replace(out, inv_max_dist=None, inv_only_max_dist_prb=None)
    return out.validate()


@dataclass(frozen=True)
class SeedPath:
    """Address of one reproducible random stream."""

    master_seed: int
    stream: str
    epoch: int = 0

    def material(self) -> bytes:
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(f"master_seed must be a 64-bit unsigned int, got {self.master_seed}")
        if self.epoch < 0:
            raise ConfigError(f"epoch must be >= 0, got {self.epoch}")
        name = self.stream.encode("utf-8")
        return struct.pack(">QI", self.master_seed, len(name)) + name + struct.pack(
            ">Q", self.epoch
        )


def derive_rng(path: SeedPath) -> np.random.Generator:
    """Deterministic PCG64 generator for a seed path.

    The path is length-framed, hashed with SHA-256, and the first 16 bytes
    seed the generator, so identical paths reproduce identical streams on
    any platform and distinct paths collide only with ~2^-128 probability.
    """
    digest = hashlib.sha256(path.material()).digest()
    entropy = int.from_bytes(digest[:16], "big")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

"""Dataset-level camouflage: ingest, the 31-test evaluation suite, and
static/dynamic adversarial training sets.

Datasets are line-delimited JSON records ``{"id", "text", "label"}``.
Camouflaged rows additionally carry a ``camo`` object with the applied
level/version and the modification records needed to restore the original
text. Every random decision is addressed by a named seed path, so each
output file can be regenerated in isolation from the master seed alone.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engines import ModificationRecord, camouflage_word
from .glyphs import GlyphTable, default_table
from .levels import (
    VERSIONS,
    LevelSpec,
    SeedPath,
    canonical_spec,
    derive_rng,
)
from .textual import (
    content_word_count,
    keywords_from_tokens,
    round_half_up,
    target_count_from_content_words,
    tokenize,
)

__all__ = [
    "PERCENTS",
    "Instance",
    "CamouflagedInstance",
    "SuiteManifest",
    "DatasetError",
    "IntegrityError",
    "read_dataset",
    "write_dataset",
    "serialize_row",
    "read_camouflaged",
    "transform_dataset",
    "camouflage_instance",
    "select_instances",
    "generate_suite",
    "static_training_set",
    "dynamic_view",
    "epoch_views",
    "revert",
    "entry_key",
    "file_checksum",
]

log = logging.getLogger(__name__)

PERCENTS = (10, 25, 50, 75, 100)
LEVELS = (1, 2, 3)

MIN_TEXT_CHARS = 3


class DatasetError(ValueError):
    """Malformed dataset file or record."""


class IntegrityError(ValueError):
    """Modification records inconsistent with the text they describe."""


@dataclass(frozen=True)
class Instance:
    """One dataset row."""

    id: str
    text: str
    label: str | int | None = None


@dataclass(frozen=True)
class CamouflagedInstance:
    """A dataset row after (possible) camouflage, with full provenance."""

    base: Instance
    text: str
    camo_applied: bool
    level: int | None = None
    version: str | None = None
    modifications: tuple[ModificationRecord, ...] = ()
    seed_path: SeedPath | None = None

    @property
    def id(self) -> str:
        return self.base.id

    @property
    def label(self) -> str | int | None:
        return self.base.label


def _instance_to_json(inst: Instance) -> str:
    rec: dict = {"id": inst.id, "text": inst.text}
    if inst.label is not None:
        rec["label"] = inst.label
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def _camo_to_json(ci: CamouflagedInstance) -> str:
    # Rows the camouflage did not touch serialize exactly like their source
    # instance, so unselected lines are byte-identical across all files.
    if not ci.camo_applied:
        return _instance_to_json(ci.base)
    rec: dict = {"id": ci.id, "text": ci.text}
    if ci.label is not None:
        rec["label"] = ci.label
    rec["camo"] = {
        "applied": True,
        "level": ci.level,
        "version": ci.version,
        "mods": [m.to_wire() for m in ci.modifications],
    }
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def serialize_row(row: Instance | CamouflagedInstance) -> str:
    """Canonical single-line JSON for a dataset row."""
    if isinstance(row, CamouflagedInstance):
        return _camo_to_json(row)
    return _instance_to_json(row)


def read_dataset(path: str | Path, *, require_label: bool = False) -> list[Instance]:
    """Read and ingest a line-delimited dataset.

    Ingest drops exact-duplicate texts (keeping the first), drops texts
    shorter than three characters after trimming, preserves case verbatim,
    and assigns sequential string ids to rows that lack one.
    """
    instances: list[Instance] = []
    seen_texts: set[str] = set()
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}:{lineno}: malformed record: {exc.msg}") from None
            if not isinstance(rec, dict) or "text" not in rec:
                raise DatasetError(f"{path}:{lineno}: record must be an object with a 'text' field")
            text = rec["text"]
            if not isinstance(text, str):
                raise DatasetError(f"{path}:{lineno}: 'text' must be a string")
            label = rec.get("label")
            if require_label and label is None:
                raise DatasetError(f"{path}:{lineno}: missing 'label'")
            inst_id = rec.get("id")
            inst_id = str(lineno - 1) if inst_id is None else str(inst_id)
            if inst_id in seen_ids:
                raise DatasetError(f"{path}:{lineno}: duplicate id {inst_id!r}")
            seen_ids.add(inst_id)
            if len(text.strip()) < MIN_TEXT_CHARS:
                continue
            if text in seen_texts:
                continue
            seen_texts.add(text)
            instances.append(Instance(id=inst_id, text=text, label=label))
    return instances


def write_dataset(path: str | Path, rows: list[Instance] | list[CamouflagedInstance]) -> str:
    """Write rows as canonical line-delimited JSON; returns the SHA-256 hex digest."""
    digest = hashlib.sha256()
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            line = (
                _camo_to_json(row) if isinstance(row, CamouflagedInstance) else _instance_to_json(row)
            )
            fh.write(line + "\n")
            digest.update(line.encode("utf-8") + b"\n")
    return digest.hexdigest()


def file_checksum(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def read_camouflaged(path: str | Path) -> list[CamouflagedInstance]:
    """Read a generated dataset back, reconstructing modification records."""
    rows: list[CamouflagedInstance] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}:{lineno}: malformed record: {exc.msg}") from None
            inst_id = str(rec.get("id", lineno - 1))
            label = rec.get("label")
            camo = rec.get("camo")
            if not camo or not camo.get("applied"):
                inst = Instance(id=inst_id, text=rec["text"], label=label)
                rows.append(_plain(inst))
                continue
            mods = tuple(
                ModificationRecord(
                    instance_id=inst_id,
                    token_index=-1,
                    start=m["start"],
                    end=m["end"],
                    original=m["orig"],
                    replacement=m["repl"],
                    method=m["method"],
                    level=camo["level"],
                    version=camo["version"],
                )
                for m in camo["mods"]
            )
            ci = CamouflagedInstance(
                base=Instance(id=inst_id, text="", label=label),
                text=rec["text"],
                camo_applied=True,
                level=camo["level"],
                version=camo["version"],
                modifications=mods,
            )
            # The original text is not stored on camouflaged rows; rebuild it
            # from the records so the returned object is self-consistent.
            original = revert(ci)
            ci = CamouflagedInstance(
                base=Instance(id=inst_id, text=original, label=label),
                text=rec["text"],
                camo_applied=True,
                level=camo["level"],
                version=camo["version"],
                modifications=mods,
            )
            rows.append(ci)
    return rows


def camouflage_instance(
    inst: Instance,
    spec: LevelSpec,
    rng: np.random.Generator,
    *,
    table: GlyphTable | None = None,
    stopwords: frozenset[str] | None = None,
    seed_path: SeedPath | None = None,
) -> CamouflagedInstance:
    """Camouflage the top-ranked keywords of one instance.

    Targets are ranked by keywords_from_tokens, counted by
    target_keyword_count, and rewritten right-to-left by span so earlier
    byte offsets stay valid. An instance with no content words is returned
    unmodified with camo_applied=False.
    """
    if table is None:
        table = default_table(spec.glyph_tier)
    tokens = tokenize(inst.text)
    keywords = keywords_from_tokens(tokens, spec.max_top_n, stopwords)
    if not keywords:
        log.debug("instance %s has no content words; left unmodified", inst.id)
        return CamouflagedInstance(
            base=inst, text=inst.text, camo_applied=False, seed_path=seed_path
        )
    count = target_count_from_content_words(
        spec.word_ratio, spec.max_top_n, content_word_count(tokens, stopwords)
    )
    targets = sorted(keywords[:count], key=lambda kw: tokens[kw.token_index].start, reverse=True)

    data = inst.text.encode("utf-8")
    records: list[ModificationRecord] = []
    for kw in targets:
        token = tokens[kw.token_index]
        replacement, record = camouflage_word(
            token.text,
            token,
            spec,
            rng,
            table=table,
            instance_id=inst.id,
            token_index=kw.token_index,
        )
        data = data[: token.start] + replacement.encode("utf-8") + data[token.end :]
        records.append(record)
    records.sort(key=lambda r: r.start)

    return CamouflagedInstance(
        base=inst,
        text=data.decode("utf-8"),
        camo_applied=True,
        level=spec.level,
        version=spec.version,
        modifications=tuple(records),
        seed_path=seed_path,
    )


def select_instances(n: int, percent: int, rng: np.random.Generator) -> frozenset[int]:
    """Uniformly sample round(percent/100 * n) distinct indices."""
    if n < 1:
        raise ValueError(f"dataset size must be >= 1, got {n}")
    if not 0 < percent <= 100:
        raise ValueError(f"percent must be in (0, 100], got {percent}")
    k = round_half_up(percent / 100 * n)
    if percent == 100 or k >= n:
        return frozenset(range(n))
    return frozenset(int(i) for i in rng.choice(n, size=k, replace=False))


def revert(ci: CamouflagedInstance) -> str:
    """Reconstruct the exact original text from a camouflaged instance.

    Records are processed in ascending span order; once a span is restored,
    every later record's original-text offset is valid again, so offsets
    need no adjustment between steps.
    """
    data = ci.text.encode("utf-8")
    for rec in sorted(ci.modifications, key=lambda r: r.start):
        repl = rec.replacement.encode("utf-8")
        end = rec.start + len(repl)
        if data[rec.start : end] != repl:
            raise IntegrityError(
                f"instance {ci.id!r}: span [{rec.start},{rec.end}) does not match "
                f"recorded replacement {rec.replacement!r}"
            )
        data = data[: rec.start] + rec.original.encode("utf-8") + data[end:]
    return data.decode("utf-8")


def _plain(inst: Instance) -> CamouflagedInstance:
    return CamouflagedInstance(base=inst, text=inst.text, camo_applied=False)


@dataclass(frozen=True)
class SuiteManifest:
    """Index of one generated evaluation suite."""

    master_seed: int
    source_path: str
    source_checksum: str
    canonical_params: bool
    entries: tuple[dict, ...]  # 30 records: key/level/version/percent/path/checksum
    original: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "master_seed": self.master_seed,
            "source_path": self.source_path,
            "source_checksum": self.source_checksum,
            "canonical_params": self.canonical_params,
            "original": self.original,
            "entries": list(self.entries),
        }
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SuiteManifest":
        doc = json.loads(text)
        return cls(
            master_seed=doc["master_seed"],
            source_path=doc["source_path"],
            source_checksum=doc["source_checksum"],
            canonical_params=doc.get("canonical_params", True),
            entries=tuple(doc["entries"]),
            original=doc.get("original", {}),
        )


def entry_key(level: int, version: str, percent: int) -> str:
    return f"l{level}.{version}.p{percent}"


def _spec_for(
    level: int, version: str, overrides: dict[tuple[int, str], dict] | None
) -> LevelSpec:
    spec = canonical_spec(level, version)
    if overrides and (level, version) in overrides:
        from .levels import apply_overrides

        spec = apply_overrides(spec, overrides[(level, version)])
    return spec


def transform_dataset(
    instances: list[Instance],
    spec: LevelSpec,
    percent: int,
    master_seed: int,
    *,
    table: GlyphTable | None = None,
    stopwords: frozenset[str] | None = None,
    camo_cache: dict[str, CamouflagedInstance] | None = None,
) -> list[CamouflagedInstance]:
    """Camouflage a sampled subset of instances at one (level, version, percent).

    Stream layout: selection uses ``camo/l<L>.<V>/p<P>/select``; each
    instance transform uses ``camo/l<L>.<V>/inst/<id>``, which is shared
    across percentages so the same row camouflages identically in every
    file of a (level, version) column.
    """
    if table is None:
        table = default_table(spec.glyph_tier)
    lv = f"l{spec.level}.{spec.version}"
    sel_rng = derive_rng(SeedPath(master_seed, f"camo/{lv}/p{percent}/select"))
    selected = select_instances(len(instances), percent, sel_rng)
    out: list[CamouflagedInstance] = []
    for i, inst in enumerate(instances):
        if i not in selected:
            out.append(_plain(inst))
            continue
        if camo_cache is not None and inst.id in camo_cache:
            out.append(camo_cache[inst.id])
            continue
        path = SeedPath(master_seed, f"camo/{lv}/inst/{inst.id}")
        ci = camouflage_instance(
            inst, spec, derive_rng(path), table=table, stopwords=stopwords, seed_path=path
        )
        if camo_cache is not None:
            camo_cache[inst.id] = ci
        out.append(ci)
    return out


def generate_suite(
    instances: list[Instance],
    outdir: str | Path,
    master_seed: int,
    *,
    source_path: str = "",
    source_checksum: str = "",
    overrides: dict[tuple[int, str], dict] | None = None,
    stopwords: frozenset[str] | None = None,
    glyph_tables: dict[str, GlyphTable] | None = None,
    force: bool = False,
) -> SuiteManifest:
    """Write the full 3x2x5 grid of camouflaged test files plus a manifest.

    Exactly 30 dataset files are produced; the original test set is the
    31st test and is referenced (path + checksum), not copied. Existing
    output files are refused unless ``force`` is set. Byte-identical on
    regeneration with the same master seed.
    """
    if not instances:
        raise DatasetError("cannot generate a suite from an empty dataset")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    planned = [
        (level, version, percent)
        for level in LEVELS
        for version in VERSIONS
        for percent in PERCENTS
    ]
    collisions = [
        str(outdir / f"{entry_key(*t)}.jsonl")
        for t in planned
        if (outdir / f"{entry_key(*t)}.jsonl").exists()
    ]
    if (outdir / "manifest.json").exists():
        collisions.append(str(outdir / "manifest.json"))
    if collisions and not force:
        raise DatasetError(
            f"output files already exist (pass force=True to overwrite): {collisions[0]}"
        )

    canonical = True
    entries: list[dict] = []
    # Serialized lines are cached: a row camouflaged at one (level, version)
    # is byte-identical in every percent file, and untouched rows are
    # byte-identical everywhere.
    plain_lines = {inst.id: _instance_to_json(inst) for inst in instances}
    for level in LEVELS:
        for version in VERSIONS:
            spec = _spec_for(level, version, overrides)
            canonical = canonical and spec.is_canonical()
            table = (glyph_tables or {}).get(spec.glyph_tier) or default_table(spec.glyph_tier)
            cache: dict[str, CamouflagedInstance] = {}
            camo_lines: dict[str, str] = {}
            for percent in PERCENTS:
                rows = transform_dataset(
                    instances,
                    spec,
                    percent,
                    master_seed,
                    table=table,
                    stopwords=stopwords,
                    camo_cache=cache,
                )
                key = entry_key(level, version, percent)
                path = outdir / f"{key}.jsonl"
                digest = hashlib.sha256()
                with open(path, "w", encoding="utf-8") as fh:
                    for row in rows:
                        if row.camo_applied:
                            line = camo_lines.get(row.id)
                            if line is None:
                                line = camo_lines[row.id] = _camo_to_json(row)
                        else:
                            line = plain_lines[row.id]
                        fh.write(line + "\n")
                        digest.update(line.encode("utf-8") + b"\n")
                checksum = digest.hexdigest()
                entries.append(
                    {
                        "key": key,
                        "level": level,
                        "version": version,
                        "percent": percent,
                        "path": path.name,
                        "checksum": checksum,
                    }
                )
                log.info("wrote %s sha256=%s", path, checksum)

    manifest = SuiteManifest(
        master_seed=master_seed,
        source_path=source_path,
        source_checksum=source_checksum,
        canonical_params=canonical,
        entries=tuple(entries),
        original={"key": "original", "path": source_path, "checksum": source_checksum},
    )
    (outdir / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def _mixed_level_view(
    instances: list[Instance],
    percent: int,
    master_seed: int,
    epoch: int,
    namespace: str,
    *,
    stopwords: frozenset[str] | None = None,
) -> list[CamouflagedInstance]:
    sel_rng = derive_rng(SeedPath(master_seed, f"{namespace}/p{percent}/select", epoch))
    selected = select_instances(len(instances), percent, sel_rng)
    out: list[CamouflagedInstance] = []
    for i, inst in enumerate(instances):
        if i not in selected:
            out.append(_plain(inst))
            continue
        path = SeedPath(master_seed, f"{namespace}/p{percent}/inst/{inst.id}", epoch)
        rng = derive_rng(path)
        level = int(rng.integers(1, 4))
        version = VERSIONS[int(rng.integers(2))]
        ci = camouflage_instance(
            inst, canonical_spec(level, version), rng, stopwords=stopwords, seed_path=path
        )
        out.append(ci)
    return out


def static_training_set(
    instances: list[Instance],
    percent: int,
    master_seed: int,
    *,
    stopwords: frozenset[str] | None = None,
) -> list[CamouflagedInstance]:
    """One fixed training set with a sampled subset camouflaged.

    Each selected instance draws its level uniformly from {1,2,3} and its
    ratio version uniformly from {v1,v2} before being camouflaged.
    """
    return _mixed_level_view(
        instances, percent, master_seed, 0, "train/static", stopwords=stopwords
    )


def dynamic_view(
    instances: list[Instance],
    percent: int,
    master_seed: int,
    epoch: int,
    *,
    stopwords: frozenset[str] | None = None,
) -> list[CamouflagedInstance]:
    """The on-the-fly training view for one epoch.

    Same contract as static_training_set, but the seed path includes the
    epoch: every epoch re-selects which instances are camouflaged and
    re-draws every transform, while the camouflaged share stays constant.
    A pure function of (dataset, percent, seed, epoch), so any epoch can be
    materialized independently.
    """
    if epoch < 0:
        raise ValueError(f"epoch must be >= 0, got {epoch}")
    return _mixed_level_view(
        instances, percent, master_seed, epoch, "train/dynamic", stopwords=stopwords
    )


def epoch_views(
    instances: list[Instance],
    percent: int,
    master_seed: int,
    *,
    stopwords: frozenset[str] | None = None,
):
    """Unbounded iterator of dynamic_view(epoch) for epoch = 0, 1, 2, ..."""
    epoch = 0
    while True:
        yield dynamic_view(instances, percent, master_seed, epoch, stopwords=stopwords)
        epoch += 1

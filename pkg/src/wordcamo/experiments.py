"""In-memory attack/defense trend experiment.

Runs the whole protocol on one train/test pair: build every suite variant,
train naive and adversarially trained baselines, score everything, and
return one robustness report per model. Kept in memory (no files) so the
full run stays fast; the CLI offers the file-based equivalent.
"""

from __future__ import annotations

import numpy as np

from .evaluation import (
    BaselineModel,
    PredictionSet,
    RobustnessReport,
    featurize,
    robustness_report,
    train_baseline,
)
from .levels import VERSIONS, canonical_spec
from .pipeline import (
    LEVELS,
    PERCENTS,
    CamouflagedInstance,
    Instance,
    SuiteManifest,
    entry_key,
    transform_dataset,
)

__all__ = ["run_trend_experiment", "build_suite_rows", "in_memory_manifest"]


def build_suite_rows(
    test: list[Instance], master_seed: int
) -> dict[str, list[CamouflagedInstance]]:
    """All 30 suite variants as in-memory row lists, keyed by entry key."""
    rows_by_key: dict[str, list[CamouflagedInstance]] = {}
    for level in LEVELS:
        for version in VERSIONS:
            spec = canonical_spec(level, version)
            cache: dict[str, CamouflagedInstance] = {}
            for percent in PERCENTS:
                rows_by_key[entry_key(level, version, percent)] = transform_dataset(
                    test, spec, percent, master_seed, camo_cache=cache
                )
    return rows_by_key


def in_memory_manifest(master_seed: int) -> SuiteManifest:
    entries = tuple(
        {
            "key": entry_key(level, version, percent),
            "level": level,
            "version": version,
            "percent": percent,
            "path": "",
            "checksum": "",
        }
        for level in LEVELS
        for version in VERSIONS
        for percent in PERCENTS
    )
    return SuiteManifest(
        master_seed=master_seed,
        source_path="",
        source_checksum="",
        canonical_params=True,
        entries=entries,
        original={"key": "original", "path": "", "checksum": ""},
    )


def run_trend_experiment(
    train: list[Instance],
    test: list[Instance],
    master_seed: int,
    *,
    epochs: int = 5,
) -> dict[str, RobustnessReport]:
    """Naive vs static(100) vs dynamic(75) robustness on one corpus.

    Each variant file is featurized once and scored by all three models.
    """
    suite_rows = build_suite_rows(test, master_seed)
    manifest = in_memory_manifest(master_seed)

    models: dict[str, BaselineModel] = {
        "naive": train_baseline(train, "naive", master_seed, epochs=epochs),
        "static100": train_baseline(train, "static", master_seed, percent=100, epochs=epochs),
        "dynamic75": train_baseline(train, "dynamic", master_seed, percent=75, epochs=epochs),
    }

    datasets: dict[str, tuple[list[str], list]] = {
        "original": ([inst.text for inst in test], [inst.id for inst in test])
    }
    for key, rows in suite_rows.items():
        datasets[key] = ([row.text for row in rows], [row.id for row in rows])

    reports: dict[str, RobustnessReport] = {}
    features = {key: featurize(texts) for key, (texts, _) in datasets.items()}
    for name, model in models.items():
        predictions: dict[str, PredictionSet] = {}
        for key, (texts, ids) in datasets.items():
            scores = features[key] @ model.weights.T + model.bias
            picks = np.argmax(scores, axis=1)
            predictions[key] = PredictionSet(
                key=key, pairs=tuple((i, model.classes[p]) for i, p in zip(ids, picks))
            )
        reports[name] = robustness_report(manifest, predictions, test)
    return reports

"""Scoring, robustness reports, and the built-in baseline classifier.

The baseline is a logistic regression over hashed character n-grams: the
smallest model that is genuinely brittle to character-level camouflage,
which makes it a usable stand-in for studying attack and defense trends at
desk scale. Training is plain seeded SGD and fully deterministic; model
files serialize byte-identically for identical inputs.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from .levels import SeedPath, derive_rng
from .pipeline import CamouflagedInstance, Instance, dynamic_view, static_training_set

__all__ = [
    "PredictionSet",
    "RobustnessReport",
    "BaselineModel",
    "EvalError",
    "f1_macro",
    "performance_reduction",
    "robustness_report",
    "train_baseline",
    "predict_baseline",
    "featurize",
    "read_predictions",
    "write_predictions",
]

N_FEATURES = 1 << 18
NGRAM_SIZES = (2, 3, 4)

_FNV_OFFSET = np.uint64(0xCBF29CE484222325)
_FNV_PRIME = np.uint64(0x100000001B3)


class EvalError(ValueError):
    """Prediction/gold mismatch or invalid scoring input."""


@dataclass(frozen=True)
class PredictionSet:
    """Predicted labels for one dataset, keyed by manifest entry."""

    key: str
    pairs: tuple[tuple[str, str | int], ...]

    def as_mapping(self) -> dict[str, str | int]:
        out: dict[str, str | int] = {}
        for inst_id, label in self.pairs:
            if inst_id in out:
                raise EvalError(f"duplicate prediction for instance {inst_id!r} in {self.key!r}")
            out[inst_id] = label
        return out


def f1_macro(gold: list, pred: list) -> float:
    """Unweighted mean of per-class F1 scores, classes taken from gold.

    A class with no predicted positives or no true positives contributes an
    F1 of zero rather than being skipped.
    """
    if len(gold) == 0:
        raise EvalError("cannot score an empty label list")
    if len(gold) != len(pred):
        raise EvalError(f"gold and pred lengths differ: {len(gold)} vs {len(pred)}")
    classes = sorted(set(gold), key=str)
    total = 0.0
    for cls in classes:
        tp = fp = fn = 0
        for g, p in zip(gold, pred):
            if p == cls:
                if g == cls:
                    tp += 1
                else:
                    fp += 1
            elif g == cls:
                fn += 1
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        if precision + recall > 0:
            total += 2 * precision * recall / (precision + recall)
    return total / len(classes)


def performance_reduction(f1_orig: float, f1_variant: float) -> float | None:
    """Relative F1 drop in percent; negative when the variant outperforms.

    Undefined (None) when the original score is not positive.
    """
    if f1_orig <= 0.0:
        return None
    return (f1_orig - f1_variant) / f1_orig * 100.0


def _collapsed_threshold(gold: list) -> float:
    """Best macro-F1 attainable by always predicting a single class."""
    classes = set(gold)
    return max(f1_macro(gold, [cls] * len(gold)) for cls in classes)


@dataclass(frozen=True)
class RobustnessReport:
    """F1 per suite variant plus the performance-reduction matrix."""

    original_f1: float
    degenerate_original: bool
    variants: dict  # key -> {level, version, percent, f1, reduction, delta_points, absent}
    table_view: dict  # "1.1".."3.2" -> 100%-file reduction, plus "Avg"
    figure_view: dict  # "l<L>.<V>" -> [[percent, reduction], ...]
    averages: dict  # per level.version mean reduction over percents, plus overall
    external: dict = field(default_factory=dict)  # extra externally-supplied test files

    def to_json(self) -> str:
        doc = {
            "original_f1": round(self.original_f1, 4),
            "degenerate_original": self.degenerate_original,
            "variants": self.variants,
            "table_view": self.table_view,
            "figure_view": self.figure_view,
            "averages": self.averages,
            "external": self.external,
        }
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _round1(x: float | None) -> float | None:
    return None if x is None else round(x, 1)


def robustness_report(
    manifest,
    predictions: dict[str, PredictionSet],
    gold: list[Instance],
    external_keys: tuple[str, ...] = (),
) -> RobustnessReport:
    """Score every suite variant against the original predictions.

    ``predictions`` maps manifest entry keys (plus "original") to
    PredictionSets. Labels for every variant come from the gold dataset by
    instance id, which is valid because camouflage never alters labels.
    Variants without predictions are reported absent, not zero. Reductions
    are reported as relative percentages rounded to one decimal, with
    absolute F1-point deltas alongside; both are None for a degenerate
    (single-class-collapsed) original model. ``external_keys`` admits extra
    rows for externally produced camouflaged test files.
    """
    if "original" not in predictions:
        raise EvalError("predictions for the original test set are required")
    gold_labels = {inst.id: inst.label for inst in gold}
    known = {e["key"] for e in manifest.entries} | {"original"} | set(external_keys)
    for key in predictions:
        if key not in known:
            raise EvalError(f"prediction set {key!r} does not match any manifest entry")

    def score(pset: PredictionSet) -> float:
        mapping = pset.as_mapping()
        missing = set(gold_labels) - set(mapping)
        extra = set(mapping) - set(gold_labels)
        if missing or extra:
            detail = []
            if missing:
                detail.append(f"missing ids: {sorted(missing)[:3]}")
            if extra:
                detail.append(f"unknown ids: {sorted(extra)[:3]}")
            raise EvalError(f"prediction set {pset.key!r} misaligned ({'; '.join(detail)})")
        ids = sorted(gold_labels)
        return f1_macro([gold_labels[i] for i in ids], [mapping[i] for i in ids])

    original_f1 = score(predictions["original"])
    degenerate = original_f1 <= _collapsed_threshold([inst.label for inst in gold]) + 1e-12

    variants: dict[str, dict] = {}
    for entry in manifest.entries:
        key = entry["key"]
        info = {
            "level": entry["level"],
            "version": entry["version"],
            "percent": entry["percent"],
            "f1": None,
            "reduction": None,
            "delta_points": None,
            "absent": True,
        }
        if key in predictions:
            f1 = score(predictions[key])
            info["f1"] = round(f1, 4)
            info["absent"] = False
            if not degenerate:
                info["reduction"] = _round1(performance_reduction(original_f1, f1))
                info["delta_points"] = _round1((original_f1 - f1) * 100.0)
        variants[key] = info

    table_view: dict[str, float | None] = {}
    figure_view: dict[str, list] = {}
    averages: dict[str, float | None] = {}
    cells = []
    for level in (1, 2, 3):
        for version in ("v1", "v2"):
            lv = f"l{level}.{version}"
            column = f"{level}.{version[1]}"
            full = variants.get(f"{lv}.p100", {})
            table_view[column] = full.get("reduction")
            curve = [
                [p, variants[f"{lv}.p{p}"]["reduction"]]
                for p in (10, 25, 50, 75, 100)
                if f"{lv}.p{p}" in variants and not variants[f"{lv}.p{p}"]["absent"]
            ]
            figure_view[lv] = curve
            reds = [r for _, r in curve if r is not None]
            averages[lv] = _round1(sum(reds) / len(reds)) if reds else None
            cells.extend(reds)
    table_cells = [v for v in table_view.values() if v is not None]
    table_view["Avg"] = _round1(sum(table_cells) / len(table_cells)) if table_cells else None
    averages["overall"] = _round1(sum(cells) / len(cells)) if cells else None

    external: dict[str, dict] = {}
    for key in external_keys:
        info = {"f1": None, "reduction": None, "delta_points": None, "absent": True}
        if key in predictions:
            f1 = score(predictions[key])
            info["f1"] = round(f1, 4)
            info["absent"] = False
            if not degenerate:
                info["reduction"] = _round1(performance_reduction(original_f1, f1))
                info["delta_points"] = _round1((original_f1 - f1) * 100.0)
        external[key] = info

    return RobustnessReport(
        original_f1=original_f1,
        degenerate_original=degenerate,
        variants=variants,
        table_view=table_view,
        figure_view=figure_view,
        averages=averages,
        external=external,
    )


def _hash_ngrams(data: bytes) -> np.ndarray:
    """FNV-1a over every byte n-gram (n = 2, 3, 4), masked to the table size."""
    arr = np.frombuffer(data, dtype=np.uint8)
    hashes = []
    for n in NGRAM_SIZES:
        if len(arr) < n:
            continue
        windows = np.lib.stride_tricks.sliding_window_view(arr, n)
        h = np.full(len(windows), _FNV_OFFSET, dtype=np.uint64)
        for k in range(n):
            h = (h ^ windows[:, k].astype(np.uint64)) * _FNV_PRIME
        hashes.append(h & np.uint64(N_FEATURES - 1))
    if not hashes:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(hashes).astype(np.int64)


def featurize(texts: list[str]) -> sparse.csr_matrix:
    """L2-normalized hashed n-gram count vectors, one row per text."""
    indptr = [0]
    indices: list[np.ndarray] = []
    values: list[np.ndarray] = []
    for text in texts:
        idx = _hash_ngrams(text.encode("utf-8"))
        uniq, counts = np.unique(idx, return_counts=True)
        vals = counts.astype(np.float64)
        norm = np.sqrt((vals**2).sum())
        if norm > 0:
            vals /= norm
        indices.append(uniq)
        values.append(vals)
        indptr.append(indptr[-1] + len(uniq))
    if not texts:
        return sparse.csr_matrix((0, N_FEATURES))
    return sparse.csr_matrix(
        (np.concatenate(values), np.concatenate(indices), np.array(indptr)),
        shape=(len(texts), N_FEATURES),
    )


MAGIC = b"WCAMO-BASELINE-1\n"


@dataclass
class BaselineModel:
    """Multinomial logistic regression over hashed character n-grams."""

    weights: np.ndarray  # (n_classes, N_FEATURES) float64
    bias: np.ndarray  # (n_classes,) float64
    classes: list  # label values in score order
    meta: dict = field(default_factory=dict)

    def save(self, path: str | Path) -> None:
        header = json.dumps(
            {
                "classes": self.classes,
                "meta": self.meta,
                "shape": list(self.weights.shape),
            },
            ensure_ascii=False,
        ).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack(">I", len(header)))
            fh.write(header)
            fh.write(self.weights.astype("<f8").tobytes())
            fh.write(self.bias.astype("<f8").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "BaselineModel":
        with open(path, "rb") as fh:
            if fh.read(len(MAGIC)) != MAGIC:
                raise EvalError(f"{path} is not a baseline model file")
            (header_len,) = struct.unpack(">I", fh.read(4))
            header = json.loads(fh.read(header_len).decode("utf-8"))
            rows, cols = header["shape"]
            weights = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8").reshape(rows, cols)
            bias = np.frombuffer(fh.read(rows * 8), dtype="<f8")
        return cls(
            weights=weights.copy(),
            bias=bias.copy(),
            classes=header["classes"],
            meta=header["meta"],
        )


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


def _sgd_epoch(
    weights: np.ndarray,
    bias: np.ndarray,
    X: sparse.csr_matrix,
    y: np.ndarray,
    order: np.ndarray,
    lr: float,
    l2: float,
) -> None:
    # L2 shrinkage is tracked as a scalar on the whole matrix so each step
    # touches only the sample's non-zero columns.
    scale = 1.0
    for row in order:
        lo, hi = X.indptr[row], X.indptr[row + 1]
        idx = X.indices[lo:hi]
        vals = X.data[lo:hi]
        scores = scale * (weights[:, idx] @ vals) + bias
        probs = _softmax(scores)
        probs[y[row]] -= 1.0
        scale *= 1.0 - lr * l2
        weights[:, idx] -= (lr / scale) * np.outer(probs, vals)
        bias -= lr * probs
    weights *= scale


def train_baseline(
    train: list[Instance],
    mode: str,
    seed: int,
    *,
    percent: int | None = None,
    epochs: int = 5,
    lr: float = 0.1,
    l2: float = 1e-6,
) -> BaselineModel:
    """Train the baseline with one of the three regimes.

    ``mode`` is "naive" (original data), "static" (pre-camouflaged once at
    ``percent``), or "dynamic" (each epoch consumes the dynamic view for
    that epoch at ``percent``). SGD runs single-threaded with a per-epoch
    1/t learning-rate decay; the sample order reshuffles each epoch from a
    derived seed, so identical inputs give bit-identical models.
    """
    if mode not in ("naive", "static", "dynamic"):
        raise EvalError(f"unknown training mode {mode!r}")
    if mode != "naive" and percent is None:
        raise EvalError(f"{mode} training requires a camouflage percent")
    if not train:
        raise EvalError("training set is empty")
    classes = sorted({inst.label for inst in train}, key=str)
    if len(classes) < 2:
        raise EvalError("training data must contain at least two classes")
    class_index = {cls: i for i, cls in enumerate(classes)}
    y = np.array([class_index[inst.label] for inst in train])

    weights = np.zeros((len(classes), N_FEATURES))
    bias = np.zeros(len(classes))

    if mode == "naive":
        X = featurize([inst.text for inst in train])
    elif mode == "static":
        rows = static_training_set(train, percent, seed)
        X = featurize([row.text for row in rows])
    for epoch in range(epochs):
        if mode == "dynamic":
            view = dynamic_view(train, percent, seed, epoch)
            X = featurize([row.text for row in view])
        order = derive_rng(SeedPath(seed, "baseline/shuffle", epoch)).permutation(len(train))
        _sgd_epoch(weights, bias, X, y, order, lr / (epoch + 1), l2)

    return BaselineModel(
        weights=weights,
        bias=bias,
        classes=classes,
        meta={
            "seed": seed,
            "epochs": epochs,
            "mode": mode,
            "percent": percent,
            "lr": lr,
            "l2": l2,
            "n_features": N_FEATURES,
            "ngram_sizes": list(NGRAM_SIZES),
        },
    )


def predict_baseline(
    model: BaselineModel, dataset: list[Instance] | list[CamouflagedInstance], key: str = ""
) -> PredictionSet:
    """Argmax class scores per row; ties break toward the earlier class."""
    if not model.classes:
        raise EvalError("model has no classes")
    if not dataset:
        return PredictionSet(key=key, pairs=())
    X = featurize([row.text for row in dataset])
    scores = X @ model.weights.T + model.bias
    picks = np.argmax(scores, axis=1)
    return PredictionSet(
        key=key,
        pairs=tuple((row.id, model.classes[p]) for row, p in zip(dataset, picks)),
    )


def read_predictions(path: str | Path, key: str) -> PredictionSet:
    """Read a line-delimited prediction file of {"id", "label"} records."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise EvalError(f"{path}:{lineno}: malformed record: {exc.msg}") from None
            if "id" not in rec or "label" not in rec:
                raise EvalError(f"{path}:{lineno}: prediction needs 'id' and 'label'")
            pairs.append((str(rec["id"]), rec["label"]))
    return PredictionSet(key=key, pairs=tuple(pairs))


def write_predictions(path: str | Path, pset: PredictionSet) -> str:
    digest = hashlib.sha256()
    with open(path, "w", encoding="utf-8") as fh:
        for inst_id, label in pset.pairs:
            line = json.dumps({"id": inst_id, "label": label}, ensure_ascii=False,
                              separators=(",", ":"))
            fh.write(line + "\n")
            digest.update(line.encode("utf-8") + b"\n")
    return digest.hexdigest()

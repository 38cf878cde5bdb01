"""Command-line interface.

Every subcommand is a thin adapter over the library: all behavior is
reachable and tested without the CLI. Exit codes: 0 success, 1 validation
error (bad flags, bad config, missing inputs, manifest mismatch, output
collisions), 2 I/O error. All randomness flows from --seed, which defaults
to DEFAULT_SEED rather than wall-clock time. Progress and per-file
checksums go to stderr; machine output goes to stdout or --out.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .evaluation import (
    BaselineModel,
    EvalError,
    f1_macro,
    predict_baseline,
    read_predictions,
    robustness_report,
    train_baseline,
    write_predictions,
)
from .glyphs import GlyphTableError, default_table, load_glyph_tables
from .levels import (
    ConfigError,
    LevelSpec,
    apply_overrides,
    canonical_spec,
    load_overrides,
)
from .pipeline import (
    PERCENTS,
    DatasetError,
    IntegrityError,
    SuiteManifest,
    dynamic_view,
    file_checksum,
    generate_suite,
    read_dataset,
    serialize_row,
    static_training_set,
    transform_dataset,
    write_dataset,
)
from .textual import load_stopwords

# Fixed default master seed; deterministic runs need no flags at all.
DEFAULT_SEED = 1729

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(ValueError):
    """Validation failure that maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit 2; the contract is 1
        raise UsageError(message)


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


# Table-derived override flags: (flag, dest, type, help with canonical default)
_SPEC_FLAGS = [
    ("--max-top-n", "max_top_n", int,
     "keyword cap per instance (canonical: 5 for v1, 20 for v2)"),
    ("--word-ratio", "word_ratio", float,
     "fraction of content words to camouflage (canonical: 0.15 for v1, 0.65 for v2)"),
    ("--leet-punt-prb", "leet_punt_prb", float,
     "probability the method draw picks leetspeak (canonical: 0.9 at levels 1-2, 0.4 at level 3)"),
    ("--leet-change-prb", "leet_change_prb", float,
     "per-character-class activation probability (canonical: 0.8 at level 1, 0.5 at levels 2-3)"),
    ("--leet-change-frq", "leet_change_frq", float,
     "per-occurrence replacement probability within an active class (canonical: 0.8)"),
    ("--leet-uniform-change", "leet_uniform_change", float,
     "probability all occurrences of a class share one glyph (canonical: 0.5 at level 1, 0.6 at levels 2-3)"),
    ("--punt-hyphenate-prb", "punt_hyphenate_prb", float,
     "probability separators go at syllable boundaries instead of every gap (canonical: 0.7, levels 2-3)"),
    ("--punt-uniform-change-prb", "punt_uniform_change_prb", float,
     "probability one separator symbol is used at all insertion points (canonical: 0.95, levels 2-3)"),
    ("--punt-word-splitting-prb", "punt_word_splitting_prb", float,
     "probability separators are flanked by spaces (canonical: 0.8, levels 2-3)"),
    ("--inv-max-dist", "inv_max_dist", int,
     "maximum distance between swapped syllables (canonical: 4, level 3)"),
    ("--inv-only-max-dist-prb", "inv_only_max_dist_prb", float,
     "probability the swap uses the maximum distance (canonical: 0.5, level 3)"),
    ("--methods", "methods", str,
     "space-separated methods: leetspeak punct_camo inv_camo (canonical set depends on level)"),
    ("--glyph-tier", "glyph_tier", str,
     "glyph table tier: basic/intermediate/advanced (canonical: matches level)"),
    ("--symbols", "symbols", str,
     "space-separated separator symbols (default: - . _ * ~ ')"),
]


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    for flag, dest, ftype, help_text in _SPEC_FLAGS:
        p.add_argument(flag, dest=dest, type=ftype, default=None, help=help_text)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"master seed for every random draw (default: {DEFAULT_SEED})")
    p.add_argument("--config", default=None,
                   help="spec override file; defaults to $CAMO_CONFIG when set")
    p.add_argument("--stopwords", default=None, help="stopword list override file")
    p.add_argument("--glyphs", default=None, help="glyph table override file")


def _resolve_spec(args) -> "LevelSpec":
    spec = canonical_spec(args.level, args.version)
    config = args.config or os.environ.get("CAMO_CONFIG")
    if config:
        overlays = load_overrides(config)
        if (args.level, args.version) in overlays:
            spec = apply_overrides(spec, overlays[(args.level, args.version)])
    overlay = {}
    for _, dest, _, _ in _SPEC_FLAGS:
        value = getattr(args, dest, None)
        if value is None:
            continue
        overlay[dest] = tuple(value.split()) if dest in ("methods", "symbols") else value
    if overlay:
        spec = apply_overrides(spec, overlay)
    return spec


def _resolve_tables(args):
    if args.glyphs:
        return load_glyph_tables(args.glyphs)
    return None


def _resolve_stopwords(args):
    if args.stopwords:
        return load_stopwords(args.stopwords)
    return None


def _cmd_transform(args) -> int:
    spec = _resolve_spec(args)
    if args.print_spec:
        print(json.dumps(dataclasses.asdict(spec), ensure_ascii=False, indent=2))
        return EXIT_OK
    if not args.infile:
        raise UsageError("transform requires --in (or --print-spec)")
    if args.percent not in PERCENTS and not 0 < args.percent <= 100:
        raise UsageError(f"--percent must be in (0, 100], got {args.percent}")
    instances = read_dataset(args.infile)
    if not instances:
        raise UsageError(f"no instances survived ingest from {args.infile}")
    tables = _resolve_tables(args)
    table = (tables or {}).get(spec.glyph_tier) or (
        default_table(spec.glyph_tier) if tables is None else None
    )
    if table is None:
        raise UsageError(f"glyph file {args.glyphs} lacks tier {spec.glyph_tier!r}")
    rows = transform_dataset(
        instances, spec, args.percent, args.seed,
        table=table, stopwords=_resolve_stopwords(args),
    )
    if args.out:
        checksum = write_dataset(args.out, rows)
        _progress(f"wrote {args.out} sha256={checksum}")
    else:
        for row in rows:
            print(serialize_row(row))
    return EXIT_OK


def _cmd_suite(args) -> int:
    instances = read_dataset(args.infile)
    if not instances:
        raise UsageError(f"no instances survived ingest from {args.infile}")
    overlays = None
    config = args.config or os.environ.get("CAMO_CONFIG")
    if config:
        overlays = load_overrides(config)
    manifest = generate_suite(
        instances,
        args.outdir,
        args.seed,
        source_path=str(args.infile),
        source_checksum=file_checksum(args.infile),
        overrides=overlays,
        stopwords=_resolve_stopwords(args),
        glyph_tables=_resolve_tables(args),
        force=args.force,
    )
    for entry in manifest.entries:
        _progress(f"{entry['path']} sha256={entry['checksum']}")
    _progress(f"manifest: {Path(args.outdir) / 'manifest.json'} ({len(manifest.entries)} variants + original)")
    return EXIT_OK


def _cmd_train_data(args) -> int:
    instances = read_dataset(args.infile)
    if not instances:
        raise UsageError(f"no instances survived ingest from {args.infile}")
    stopwords = _resolve_stopwords(args)
    if args.mode == "static":
        rows = static_training_set(instances, args.percent, args.seed, stopwords=stopwords)
    else:
        rows = dynamic_view(instances, args.percent, args.seed, args.epoch, stopwords=stopwords)
    checksum = write_dataset(args.out, rows)
    _progress(f"wrote {args.out} sha256={checksum}")
    return EXIT_OK


def _cmd_baseline_train(args) -> int:
    instances = read_dataset(args.train, require_label=True)
    model = train_baseline(
        instances, args.mode, args.seed, percent=args.percent, epochs=args.epochs
    )
    model.save(args.out)
    _progress(f"wrote {args.out} sha256={file_checksum(args.out)}")
    return EXIT_OK


def _cmd_baseline_predict(args) -> int:
    model = BaselineModel.load(args.model)
    instances = read_dataset(args.infile)
    pset = predict_baseline(model, instances, key=Path(args.infile).stem)
    if args.out:
        checksum = write_predictions(args.out, pset)
        _progress(f"wrote {args.out} sha256={checksum}")
    else:
        for inst_id, label in pset.pairs:
            print(json.dumps({"id": inst_id, "label": label}, ensure_ascii=False,
                             separators=(",", ":")))
    return EXIT_OK


def _cmd_eval(args) -> int:
    gold = read_dataset(args.gold, require_label=True)
    preds = read_predictions(args.pred, "pred").as_mapping()
    missing = [inst.id for inst in gold if inst.id not in preds]
    if missing:
        raise UsageError(f"predictions missing for {len(missing)} gold ids (first: {missing[0]!r})")
    f1 = f1_macro([inst.label for inst in gold], [preds[inst.id] for inst in gold])
    print(round(f1, 6))
    return EXIT_OK


def _cmd_report(args) -> int:
    manifest = SuiteManifest.from_json(Path(args.manifest).read_text(encoding="utf-8"))
    gold = read_dataset(args.gold, require_label=True)
    external = tuple(args.external or ())

    models: dict[str, dict] = {}
    rows = []
    for pair in args.preds:
        name, _, directory = pair.partition("=")
        if not directory:
            raise UsageError(f"--preds takes NAME=DIR, got {pair!r}")
        pred_dir = Path(directory)
        predictions = {}
        for key in ["original"] + [e["key"] for e in manifest.entries] + list(external):
            pred_path = pred_dir / f"{key}.jsonl"
            if pred_path.exists():
                predictions[key] = read_predictions(pred_path, key)
        report = robustness_report(manifest, predictions, gold, external_keys=external)
        doc = json.loads(report.to_json())
        models[name] = doc
        row = {"Model": name, "F1-Macro": doc["original_f1"]}
        row.update({col: doc["table_view"].get(col) for col in
                    ("1.1", "1.2", "2.1", "2.2", "3.1", "3.2", "Avg")})
        for ext in external:
            row[ext] = doc["external"].get(ext, {}).get("reduction")
        rows.append(row)

    out_doc = json.dumps({"models": models}, ensure_ascii=False, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(out_doc, encoding="utf-8")
        _progress(f"wrote {args.out}")
    else:
        sys.stdout.write(out_doc)
    if args.csv:
        fieldnames = ["Model", "F1-Macro", "1.1", "1.2", "2.1", "2.2", "3.1", "3.2", "Avg"]
        fieldnames += list(external)
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
        _progress(f"wrote {args.csv}")
    return EXIT_OK


def _cmd_corpus(args) -> int:
    train_path, test_path = corpus_mod.write_bundled_corpus(
        args.outdir, n_train=args.train_size, n_test=args.test_size
    )
    _progress(f"wrote {train_path} sha256={file_checksum(train_path)}")
    _progress(f"wrote {test_path} sha256={file_checksum(test_path)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordcamo", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="camouflage one dataset at a single level/version",
                       description="Camouflage a dataset at one (level, version, percent).")
    p.add_argument("--in", dest="infile", default=None, help="input dataset (JSONL)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--level", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--version", required=True, choices=("v1", "v2"))
    p.add_argument("--percent", type=int, default=100,
                   help="share of instances to camouflage (default: 100)")
    p.add_argument("--print-spec", action="store_true",
                   help="print the resolved level spec as JSON and exit")
    _add_common(p)
    _add_spec_flags(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("suite", help="generate the 30-variant evaluation suite + manifest",
                       description="Write the full 3x2x5 grid of camouflaged test sets.")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--force", action="store_true", help="overwrite existing output files")
    _add_common(p)
    p.set_defaults(func=_cmd_suite)

    p = sub.add_parser("train-data", help="materialize a static or dynamic training set",
                       description="Camouflaged training data with mixed random levels.")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", required=True, choices=("static", "dynamic"))
    p.add_argument("--percent", type=int, required=True, choices=PERCENTS)
    p.add_argument("--epoch", type=int, default=0,
                   help="epoch to materialize in dynamic mode (default: 0)")
    _add_common(p)
    p.set_defaults(func=_cmd_train_data)

    p = sub.add_parser("baseline-train", help="train the built-in baseline classifier")
    p.add_argument("--train", required=True, help="labeled training dataset")
    p.add_argument("--mode", required=True, choices=("naive", "static", "dynamic"))
    p.add_argument("--percent", type=int, default=None, choices=PERCENTS,
                   help="camouflage percent for static/dynamic modes")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--out", required=True, help="model output path")
    _add_common(p)
    p.set_defaults(func=_cmd_baseline_train)

    p = sub.add_parser("baseline-predict", help="predict labels with a trained baseline")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None, help="prediction output path (default: stdout)")
    p.set_defaults(func=_cmd_baseline_predict)

    p = sub.add_parser("eval", help="score predictions against gold labels (F1-macro)")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="build the robustness report for one or more models")
    p.add_argument("--manifest", required=True)
    p.add_argument("--gold", required=True, help="original test dataset with labels")
    p.add_argument("--preds", action="append", required=True,
                   help="NAME=DIR with per-variant prediction files <key>.jsonl (repeatable)")
    p.add_argument("--external", action="append", default=None,
                   help="extra externally-camouflaged entry key to score (repeatable)")
    p.add_argument("--out", default=None, help="report JSON path (default: stdout)")
    p.add_argument("--csv", default=None, help="also write the table view as CSV")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("corpus", help="materialize the bundled benchmark corpus")
    p.add_argument("--outdir", required=True)
    p.add_argument("--train-size", type=int, default=4000)
    p.add_argument("--test-size", type=int, default=1000)
    p.set_defaults(func=_cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"wordcamo: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DatasetError, GlyphTableError, EvalError, IntegrityError) as exc:
        print(f"wordcamo: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"wordcamo: missing input: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"wordcamo: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

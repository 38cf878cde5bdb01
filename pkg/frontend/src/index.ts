/**
 * Bindings for the `wordcamo` CLI.
 *
 * Everything here marshals datasets and records across the process
 * boundary; no camouflage logic is reimplemented. Outputs are therefore
 * byte-identical to what the CLI writes for the same (dataset, spec,
 * seed, epoch), which the parity tests pin down.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface ModificationRecord {
  start: number;
  end: number;
  orig: string;
  repl: string;
  method: string;
}

export interface CamoInfo {
  applied: boolean;
  level: number | null;
  version: string | null;
  mods: ModificationRecord[];
}

export interface DatasetRow {
  id: string;
  text: string;
  label?: string | number;
  camo?: CamoInfo;
}

export interface LevelSpec {
  level: number;
  version: string;
  max_top_n: number;
  word_ratio: number;
  leet_punt_prb: number;
  leet_change_prb: number;
  leet_change_frq: number;
  leet_uniform_change: number;
  methods: string[];
  glyph_tier: string;
  punt_hyphenate_prb: number | null;
  punt_uniform_change_prb: number | null;
  punt_word_splitting_prb: number | null;
  inv_max_dist: number | null;
  inv_only_max_dist_prb: number | null;
  symbols: string[];
}

export interface TransformOptions {
  level: 1 | 2 | 3;
  version: "v1" | "v2";
  percent?: number;
  seed?: number;
  /** Spec override file handed to the CLI as --config. */
  config?: string;
}

export interface ViewOptions {
  percent: number;
  seed?: number;
}

export interface BoundResult {
  rows: DatasetRow[];
  /** Exact bytes the CLI wrote, for byte-parity consumers. */
  bytes: Buffer;
}

export interface EpochView extends BoundResult {
  epoch: number;
}

/** Raised when the CLI exits non-zero; carries its exit code and stderr. */
export class WordcamoCliError extends Error {
  constructor(
    public readonly exitCode: number,
    public readonly stderr: string,
    args: string[],
  ) {
    super(`wordcamo ${args[0]} failed (exit ${exitCode}): ${stderr.trim()}`);
    this.name = "WordcamoCliError";
  }
}

const CLI = process.env.WORDCAMO_CLI ?? "wordcamo";

function runCli(args: string[]): void {
  const result = spawnSync(CLI, args, { encoding: "utf-8" });
  if (result.error) throw result.error;
  if (result.status !== 0) {
    throw new WordcamoCliError(result.status ?? -1, result.stderr ?? "", args);
  }
}

function runCliCapture(args: string[]): string {
  const result = spawnSync(CLI, args, { encoding: "utf-8" });
  if (result.error) throw result.error;
  if (result.status !== 0) {
    throw new WordcamoCliError(result.status ?? -1, result.stderr ?? "", args);
  }
  return result.stdout;
}

function parseRows(bytes: Buffer): DatasetRow[] {
  return bytes
    .toString("utf-8")
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as DatasetRow);
}

type DatasetInput = string | DatasetRow[];

function withDataset<T>(input: DatasetInput, fn: (path: string, scratch: string) => T): T {
  const scratch = mkdtempSync(join(tmpdir(), "wordcamo-"));
  try {
    let path: string;
    if (typeof input === "string") {
      path = input;
    } else {
      path = join(scratch, "input.jsonl");
      const body = input.map((row) => JSON.stringify(row)).join("\n") + "\n";
      writeFileSync(path, body, "utf-8");
    }
    return fn(path, scratch);
  } finally {
    rmSync(scratch, { recursive: true, force: true });
  }
}

/** The resolved parameterization of one complexity level and version. */
export function spec(level: 1 | 2 | 3, version: "v1" | "v2"): LevelSpec {
  const stdout = runCliCapture([
    "transform", "--level", String(level), "--version", version, "--print-spec",
  ]);
  return JSON.parse(stdout) as LevelSpec;
}

/** Camouflage a dataset (file path or rows) at one level/version. */
export function transform(input: DatasetInput, options: TransformOptions): BoundResult {
  return withDataset(input, (path, scratch) => {
    const out = join(scratch, "out.jsonl");
    const args = [
      "transform",
      "--in", path,
      "--out", out,
      "--level", String(options.level),
      "--version", options.version,
      "--percent", String(options.percent ?? 100),
    ];
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    if (options.config !== undefined) args.push("--config", options.config);
    runCli(args);
    const bytes = readFileSync(out);
    return { rows: parseRows(bytes), bytes };
  });
}

/** One fixed training set with mixed random levels on a sampled subset. */
export function staticSet(input: DatasetInput, options: ViewOptions): BoundResult {
  return materializeView(input, "static", options, 0);
}

/** The dynamic training view for a single epoch. */
export function dynamicEpoch(
  input: DatasetInput,
  options: ViewOptions,
  epoch: number,
): EpochView {
  return { epoch, ...materializeView(input, "dynamic", options, epoch) };
}

/**
 * Unbounded epoch-indexed iterable of dynamic views (epoch 0, 1, 2, ...).
 * Restartable: each call starts again at epoch 0 and yields identical views.
 */
export function* epochs(input: DatasetInput, options: ViewOptions): Generator<EpochView> {
  for (let epoch = 0; ; epoch++) {
    yield dynamicEpoch(input, options, epoch);
  }
}

function materializeView(
  input: DatasetInput,
  mode: "static" | "dynamic",
  options: ViewOptions,
  epoch: number,
): BoundResult {
  return withDataset(input, (path, scratch) => {
    const out = join(scratch, "view.jsonl");
    const args = [
      "train-data",
      "--in", path,
      "--out", out,
      "--mode", mode,
      "--percent", String(options.percent),
    ];
    if (mode === "dynamic") args.push("--epoch", String(epoch));
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    runCli(args);
    const bytes = readFileSync(out);
    return { rows: parseRows(bytes), bytes };
  });
}

/** A dataset + master seed bound together for repeated calls. */
export class BoundSession {
  constructor(
    public readonly dataset: string,
    public readonly seed: number,
  ) {}

  spec(level: 1 | 2 | 3, version: "v1" | "v2"): LevelSpec {
    return spec(level, version);
  }

  transform(options: Omit<TransformOptions, "seed">): BoundResult {
    return transform(this.dataset, { ...options, seed: this.seed });
  }

  staticSet(percent: number): BoundResult {
    return staticSet(this.dataset, { percent, seed: this.seed });
  }

  epochs(percent: number): Generator<EpochView> {
    return epochs(this.dataset, { percent, seed: this.seed });
  }
}

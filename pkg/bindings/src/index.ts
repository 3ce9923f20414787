/**
 * Thin Node bindings for the asralign CLI.
 *
 * Every call spawns `python3 -m asralign.cli` and returns its JSON
 * verbatim; no alignment or scoring logic lives on this side, and the
 * module keeps no state between calls. The Python package must be
 * installed in the interpreter used (override with the `python` option
 * or the ASRALIGN_PYTHON environment variable).
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export type Op = "MATCH" | "SUB" | "DEL" | "INS";

export interface AlignmentSegment {
  op: Op;
  /** null for pure insertions, which consume no reference word */
  refTokenIndex: number | null;
  refText: string;
  hypText: string;
  cost: number;
  refCharSpan: [number, number];
  hypCharSpan: [number, number];
  refSourceSpan: [number, number];
  hypSourceSpan: [number, number];
}

export interface AlignmentDocument {
  pairId: string;
  method: string;
  config: Record<string, unknown>;
  segments: AlignmentSegment[];
  cost: number;
  denominator: number;
  totalCost: number;
  timingMs: number;
  notes: string[];
}

export interface PairScore {
  pairId: string;
  globalNumerator: number;
  localDenominator: number;
  opCounts: Record<string, number>;
}

export interface MethodReport {
  method: string;
  gle: number;
  perPair: PairScore[];
  diagnostics: Record<string, unknown>;
}

export interface PermutationTestReport {
  methods: string[];
  statistic: number;
  pValue: number;
  resamples: number;
  seed: number;
}

export interface EvalReport {
  corpus: string;
  format: string;
  config: Record<string, unknown>;
  methods: Record<string, MethodReport>;
  wer: number | null;
  permutationTest: PermutationTestReport | null;
}

export interface AlignOptions {
  method?: "beam" | "lwa" | "owa";
  beamSize?: number;
  substitutionPenalty?: boolean;
  unitCostTransitions?: boolean;
  restrictToBacktrace?: boolean;
  vowels?: string;
  /** interpreter to run; default ASRALIGN_PYTHON, then "python3" */
  python?: string;
}

export interface GlePair {
  id?: string;
  ref: string;
  hyp: string;
}

export interface GleOptions extends AlignOptions {
  /** aligners to score; default ["beam"] */
  methods?: string[];
  /** pair of method names to compare with the paired permutation test */
  permutationTest?: [string, string];
  resamples?: number;
  seed?: number;
  workers?: number;
}

/** Non-zero exit from the CLI: 1 input error, 2 invariant violation. */
export class CliError extends Error {
  constructor(
    readonly exitCode: number,
    readonly stderr: string,
  ) {
    super(`asralign exited with code ${exitCode}: ${stderr.trim()}`);
    this.name = "CliError";
  }
}

function interpreter(options: AlignOptions): string {
  return options.python ?? process.env.ASRALIGN_PYTHON ?? "python3";
}

function configArgs(options: AlignOptions): string[] {
  const args: string[] = [];
  if (options.method !== undefined) args.push("--method", options.method);
  if (options.beamSize !== undefined) {
    args.push("--beam-size", String(options.beamSize));
  }
  if (options.substitutionPenalty === false) {
    args.push("--no-substitution-penalty");
  }
  if (options.unitCostTransitions) args.push("--unit-cost");
  if (options.restrictToBacktrace) args.push("--restrict-backtrace");
  if (options.vowels !== undefined) args.push("--vowels", options.vowels);
  return args;
}

function runCli(python: string, args: string[]): string {
  const result = spawnSync(python, ["-m", "asralign.cli", ...args], {
    encoding: "utf8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (result.error) throw result.error;
  if (result.status !== 0) {
    throw new CliError(result.status ?? -1, result.stderr ?? "");
  }
  return result.stdout;
}

/** Align one reference/hypothesis pair; returns the CLI's document. */
export function align(
  ref: string,
  hyp: string,
  options: AlignOptions = {},
): AlignmentDocument {
  const stdout = runCli(interpreter(options), [
    "align",
    "--ref", ref,
    "--hyp", hyp,
    "--style", "json",
    ...configArgs(options),
  ]);
  return JSON.parse(stdout) as AlignmentDocument;
}

/** Score a corpus of pairs; returns the CLI's evaluation report. */
export function gle(
  pairs: readonly GlePair[],
  options: GleOptions = {},
): EvalReport {
  const workDir = mkdtempSync(join(tmpdir(), "asralign-"));
  try {
    const corpusPath = join(workDir, "corpus.jsonl");
    const reportPath = join(workDir, "report.json");
    const lines = pairs.map((pair, i) =>
      JSON.stringify({ id: pair.id ?? String(i + 1), ref: pair.ref, hyp: pair.hyp }));
    writeFileSync(corpusPath, lines.join("\n") + "\n", "utf8");

    const args = [
      "eval",
      "--corpus", corpusPath,
      "--report", reportPath,
      ...configArgs(options),
    ];
    if (options.methods !== undefined) {
      args.push("--methods", options.methods.join(","));
    }
    if (options.permutationTest !== undefined) {
      args.push("--permutation-test", options.permutationTest.join(","));
    }
    if (options.resamples !== undefined) {
      args.push("--resamples", String(options.resamples));
    }
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    if (options.workers !== undefined) {
      args.push("--workers", String(options.workers));
    }
    runCli(interpreter(options), args);
    return JSON.parse(readFileSync(reportPath, "utf8")) as EvalReport;
  } finally {
    rmSync(workDir, { recursive: true, force: true });
  }
}

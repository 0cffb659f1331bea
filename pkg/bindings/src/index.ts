/**
 * Node bindings for the tlsqlc compiler.
 *
 * `convert` hands a TLSQL program to the `tlsqlc` command line tool
 * (`compile --format json` over stdin) and repackages the result. Nothing
 * is recomputed here: the SQL text and the manifest come back verbatim,
 * so the bindings stay faithful to the compiler by construction.
 */

import { spawnSync } from "node:child_process";

import {
  CliError,
  LexError,
  ParseError,
  SemanticError,
  TlsqlError,
} from "./errors.js";

export { CliError, LexError, ParseError, SemanticError, TlsqlError };

/** A warning attached to the manifest, e.g. code "W002". */
export interface ManifestWarning {
  code: string;
  message: string;
}

/** The column being predicted. */
export interface TargetSpec {
  table: string;
  column: string;
}

/** Role a generated query plays in the task. */
export type Role = "test" | "train" | "validate";

/** Per-table entry of the manifest: which columns each query selects. */
export interface TableEntry {
  table: string;
  role: Role;
  /** Explicit column list, or "*" for all columns. */
  columns: string[] | "*";
}

/** Evaluation split: k-fold cross-validation or a held-out set. */
export interface SplitSpec {
  strategy: "cv" | "holdout";
  folds?: number;
}

/** The task manifest, exactly as the compiler emits it. */
export interface Manifest {
  tlsql_manifest_version: string;
  task_type: "classification" | "regression";
  target: TargetSpec;
  level: "I" | "II" | "III";
  split: SplitSpec;
  label_autoincluded: boolean;
  warnings: ManifestWarning[];
  tables: TableEntry[];
}

/**
 * Result of converting one TLSQL program.
 *
 * `sql` maps each role/table pair to its query text, keyed
 * `"<role>_<table>"` — the same stems the CLI uses for its `.sql`
 * artifact files (e.g. `"test_users"`, `"train_movies"`). Role and table
 * never repeat as a pair, so the key is unique. `warnings` mirrors
 * `metadata.warnings` for convenience.
 */
export interface BoundConversionResult {
  sql: Record<string, string>;
  metadata: Manifest;
  warnings: ManifestWarning[];
}

interface CompileOutput {
  queries: { table: string; role: Role; sql: string }[];
  manifest: Manifest;
}

interface RunResult {
  status: number | null;
  stdout: string;
  stderr: string;
}

const COMPILE_ARGS = ["compile", "-", "--format", "json"];

// First positioned diagnostic on stderr: "<file>:<line>:<col>: error[Exxx]: msg".
const DIAGNOSTIC = /^[^\n]*?:(\d+):(\d+): error\[([A-Z]\d{3})\]: (.*)$/m;

function runCompiler(source: string): RunResult {
  // $TLSQLC pins the executable; otherwise fall back from the console
  // script to the module entry point.
  const candidates: string[][] = process.env.TLSQLC
    ? [[process.env.TLSQLC]]
    : [["tlsqlc"], ["python3", "-m", "tlsql"]];
  for (const [cmd, ...rest] of candidates) {
    const proc = spawnSync(cmd, [...rest, ...COMPILE_ARGS], {
      input: source,
      encoding: "utf8",
      maxBuffer: 64 * 1024 * 1024,
    });
    if (proc.error) {
      if ((proc.error as NodeJS.ErrnoException).code === "ENOENT") {
        continue;
      }
      throw new CliError(`failed to run ${cmd}: ${proc.error.message}`);
    }
    return { status: proc.status, stdout: proc.stdout, stderr: proc.stderr };
  }
  throw new CliError(
    "could not find the tlsql compiler; install the tlsql package or point $TLSQLC at the tlsqlc executable",
  );
}

function diagnosticFrom(run: RunResult): Error {
  const hit = DIAGNOSTIC.exec(run.stderr);
  if (hit === null) {
    return new CliError(
      `tlsqlc exited with status ${run.status}: ${run.stderr.trim()}`,
    );
  }
  const [, line, column, code, message] = hit;
  const cls = code.startsWith("E0")
    ? LexError
    : code.startsWith("E1")
      ? ParseError
      : code.startsWith("E2")
        ? SemanticError
        : TlsqlError;
  return new cls(code, Number(line), Number(column), message);
}

/**
 * Compile a TLSQL program.
 *
 * Returns the generated queries and manifest on success. On a compiler
 * diagnostic, throws LexError, ParseError, or SemanticError carrying
 * `code`, `line`, `column`, and `message`. Throws CliError when the
 * compiler itself cannot be invoked.
 */
export function convert(tlsql: string): BoundConversionResult {
  const run = runCompiler(tlsql);
  if (run.status !== 0) {
    throw diagnosticFrom(run);
  }
  let parsed: CompileOutput;
  try {
    parsed = JSON.parse(run.stdout) as CompileOutput;
  } catch (exc) {
    throw new CliError(`tlsqlc produced malformed JSON: ${String(exc)}`);
  }
  const sql: Record<string, string> = {};
  for (const query of parsed.queries) {
    sql[`${query.role}_${query.table}`] = query.sql;
  }
  return {
    sql,
    metadata: parsed.manifest,
    warnings: [...parsed.manifest.warnings],
  };
}

/**
 * Error types raised by `convert`.
 *
 * Compiler diagnostics map onto three classes by code range: E0xx lexical,
 * E1xx syntactic, E2xx semantic. Every diagnostic error carries the code,
 * the 1-based source position, and the bare message (no source excerpt).
 */

/** Base class for compiler diagnostics surfaced as exceptions. */
export class TlsqlError extends Error {
  /** Diagnostic code, e.g. "E201". */
  readonly code: string;
  /** 1-based line of the offending source position. */
  readonly line: number;
  /** 1-based column of the offending source position. */
  readonly column: number;

  constructor(code: string, line: number, column: number, message: string) {
    super(message);
    this.name = new.target.name;
    this.code = code;
    this.line = line;
    this.column = column;
  }
}

/** Invalid character or malformed token (codes E0xx). */
export class LexError extends TlsqlError {}

/** Grammar violation (codes E1xx). */
export class ParseError extends TlsqlError {}

/** Name binding, routing, or statement-level rule violation (codes E2xx). */
export class SemanticError extends TlsqlError {}

/**
 * The compiler executable could not be run, or exited in a way that is not
 * a source diagnostic (missing binary, malformed output, usage error).
 */
export class CliError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CliError";
  }
}

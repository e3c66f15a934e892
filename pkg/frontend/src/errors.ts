/** Error types shared by the readers and renderers.
 *
 * All three mark bad *input* (as opposed to bugs), so the CLI maps them to
 * exit code 2 and never writes an output file when one is thrown.
 */

/** A CSV/JSON input does not match its documented schema. */
export class SchemaMismatchError extends Error {
  /** The offending column or field name. */
  readonly column: string;

  constructor(column: string, message: string) {
    super(message);
    this.name = "SchemaMismatchError";
    this.column = column;
  }
}

/** A structurally valid input that contains no data rows. */
export class EmptyInputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInputError";
  }
}

/** A PGM file the image reader does not support. */
export class UnsupportedImageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UnsupportedImageError";
  }
}

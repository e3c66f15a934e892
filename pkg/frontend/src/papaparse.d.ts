/** Minimal typings for the subset of papaparse used by this package. */
declare module "papaparse" {
  export interface ParseMeta {
    fields?: string[];
    delimiter: string;
  }

  export interface ParseError {
    message: string;
    row?: number;
  }

  export interface ParseResult<T> {
    data: T[];
    errors: ParseError[];
    meta: ParseMeta;
  }

  export interface ParseConfig {
    header?: boolean;
    skipEmptyLines?: boolean | "greedy";
  }

  export function parse<T>(input: string, config?: ParseConfig): ParseResult<T>;

  const Papa: { parse: typeof parse };
  export default Papa;
}

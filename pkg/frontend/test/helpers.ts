import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = fileURLToPath(new URL("./fixtures/", import.meta.url));

export function fixture(name: string): string {
  return join(FIXTURES, name);
}

export function makeTempDir(): string {
  return mkdtempSync(join(tmpdir(), "pursuit-figures-"));
}

/** Copy a file into `dir` with its text transformed (for tampering). */
export function tamperedCopy(
  source: string,
  dir: string,
  name: string,
  transform: (text: string) => string
): string {
  const text = readFileSync(source, "utf8");
  const path = join(dir, name);
  writeFileSync(path, transform(text));
  return path;
}

/**
 * plot --kind <norm-history|convergence|stability-region> --in <csv> --out <svg>
 *
 * Exit codes: 0 rendered, 2 usage or schema mismatch, 3 file I/O error.
 * Nothing is written unless rendering succeeds.
 */

import { CsvSchemaError } from "./csv.js";
import { PlotKind, render } from "./render.js";

const KINDS: PlotKind[] = ["norm-history", "convergence", "stability-region"];

function usage(): string {
  return (
    "usage: plot --kind <" + KINDS.join("|") + "> --in <csv> --out <svg>"
  );
}

export function main(argv: string[]): number {
  const args = new Map<string, string>();
  let command: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const token = argv[i]!;
    if (token.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) {
        console.error(`missing value for ${token}\n${usage()}`);
        return 2;
      }
      args.set(token.slice(2), value);
      i++;
    } else if (command === undefined) {
      command = token;
    } else {
      console.error(`unexpected argument ${token}\n${usage()}`);
      return 2;
    }
  }
  if (command !== undefined && command !== "plot") {
    console.error(`unknown command ${command}\n${usage()}`);
    return 2;
  }
  const kind = args.get("kind");
  const input = args.get("in");
  const output = args.get("out");
  if (kind === undefined || input === undefined || output === undefined) {
    console.error(usage());
    return 2;
  }
  if (!KINDS.includes(kind as PlotKind)) {
    console.error(`unknown plot kind ${kind}\n${usage()}`);
    return 2;
  }
  try {
    render({ kind: kind as PlotKind, inputCsv: input, outputPath: output });
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(`i/o error: ${err instanceof Error ? err.message : String(err)}`);
    return 3;
  }
  console.log(`wrote ${output}`);
  return 0;
}

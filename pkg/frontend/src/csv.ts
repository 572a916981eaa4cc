/**
 * Reader for the artifact CSV dialect.
 *
 * Files open with zero or more `# key = value` metadata lines, then a
 * header row, then data rows.  Parsing of the tabular body is delegated
 * to papaparse; this module only peels off the metadata prologue.
 */

import Papa from "papaparse";

export interface Artifact {
  metadata: Record<string, string>;
  header: string[];
  rows: string[][];
}

export class CsvError extends Error {}

export function parseArtifact(text: string): Artifact {
  const lines = text.split("\n");
  const metadata: Record<string, string> = {};
  let bodyStart = 0;
  for (const line of lines) {
    if (!line.startsWith("#")) break;
    bodyStart += 1;
    const stripped = line.slice(1).trim();
    const sep = stripped.indexOf("=");
    if (sep < 0) continue;
    const key = stripped.slice(0, sep).trim();
    const value = stripped.slice(sep + 1).trim();
    if (key !== "") metadata[key] = value;
  }

  const body = lines.slice(bodyStart).join("\n");
  const parsed = Papa.parse<string[]>(body, {
    header: false,
    delimiter: ",",
    newline: "\n",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new CsvError(`malformed CSV: ${first.message}`);
  }
  const table = parsed.data;
  if (table.length === 0) {
    throw new CsvError("no header row");
  }
  const header = table[0]!.map((cell) => cell.trim());
  return { metadata, header, rows: table.slice(1) };
}

/** Parse a float cell, rejecting anything the producer would not emit. */
export function num(cell: string | undefined, column: string): number {
  if (cell === undefined) {
    throw new CsvError(`row is missing the ${column} column`);
  }
  const value = Number(cell);
  if (cell.trim() === "" || Number.isNaN(value)) {
    throw new CsvError(`column ${column} has non-numeric cell ${JSON.stringify(cell)}`);
  }
  return value;
}

/**
 * Strict reader for the simulator's CSV artifacts.
 *
 * The files are plain RFC-4180 tables preceded by `#` comment lines; the
 * comments carry provenance (`#cfg key = value` echoes of the run
 * configuration plus free-form notes like `# W = 1.77e+00`). Parsing is
 * deliberately unforgiving: a ragged row, an unknown numeric format, or a
 * missing column is a corrupted artifact and raises CsvError naming the
 * file and line, never a silently skipped row.
 */

export class CsvError extends Error {
  constructor(
    readonly file: string,
    message: string,
  ) {
    super(`${file}: ${message}`);
    this.name = "CsvError";
  }
}

export interface CsvTable {
  file: string;
  header: string[];
  rows: string[][];
  /** comment lines with the leading `#` and padding stripped */
  comments: string[];
}

/** Split one CSV record, honoring double-quoted fields with "" escapes. */
function splitRecord(line: string, file: string, lineNo: number): string[] {
  const out: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch === '"') {
      if (field !== "") {
        throw new CsvError(file, `line ${lineNo}: quote inside unquoted field`);
      }
      quoted = true;
    } else if (ch === ",") {
      out.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  if (quoted) {
    throw new CsvError(file, `line ${lineNo}: unterminated quoted field`);
  }
  out.push(field);
  return out;
}

export function parseCsv(text: string, file: string): CsvTable {
  const comments: string[] = [];
  let header: string[] | null = null;
  const rows: string[][] = [];

  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i]!;
    if (line.trim() === "") continue;
    if (line.startsWith("#")) {
      comments.push(line.replace(/^#\s?/, ""));
      continue;
    }
    const record = splitRecord(line, file, i + 1);
    if (header === null) {
      header = record.map((h) => h.trim());
      continue;
    }
    if (record.length !== header.length) {
      throw new CsvError(
        file,
        `line ${i + 1}: expected ${header.length} fields, got ${record.length}`,
      );
    }
    rows.push(record);
  }

  if (header === null) {
    throw new CsvError(file, "no header row (file is empty or all comments)");
  }
  if (rows.length === 0) {
    throw new CsvError(file, "no data rows");
  }
  return { file, header, rows, comments };
}

const NUMBER = /^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$/;

/** Strict string-to-number: scientific notation and bare nan/inf only. */
export function toNumber(raw: string, file: string, context: string): number {
  const s = raw.trim();
  if (NUMBER.test(s)) return Number(s);
  if (s === "nan") return Number.NaN;
  if (s === "inf") return Number.POSITIVE_INFINITY;
  if (s === "-inf") return Number.NEGATIVE_INFINITY;
  throw new CsvError(file, `${context}: not a number: ${JSON.stringify(raw)}`);
}

/** Pull a named column as numbers, erroring if the header lacks it. */
export function numericColumn(table: CsvTable, name: string): number[] {
  const k = table.header.indexOf(name);
  if (k < 0) {
    throw new CsvError(
      table.file,
      `missing column ${JSON.stringify(name)} (header: ${table.header.join(",")})`,
    );
  }
  return table.rows.map((row, i) =>
    toNumber(row[k]!, table.file, `row ${i + 1}, column ${name}`),
  );
}

/**
 * Fish a `# key = value` comment out of the preamble, e.g. the pump rate
 * `W` a spectrum file was produced at. Returns null when absent.
 */
export function commentValue(table: CsvTable, key: string): string | null {
  for (const c of table.comments) {
    const m = c.match(/^(\S+)\s*=\s*(.*)$/);
    if (m && m[1] === key) return m[2]!.trim();
  }
  return null;
}

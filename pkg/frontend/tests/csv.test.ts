import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { CsvError, commentValue, numericColumn, parseCsv, toNumber } from "../src/csv.js";

const fixture = (name: string) =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

const read = (name: string) => readFileSync(fixture(name), "utf8");

describe("parseCsv on real artifacts", () => {
  it("reads a spectrum table with its comment preamble", () => {
    const t = parseCsv(read("spectrum_W1.77.csv"), "spectrum_W1.77.csv");
    expect(t.header).toEqual(["omega_offset", "intensity"]);
    expect(t.rows).toHaveLength(1201);
    expect(t.comments.some((c) => c.startsWith("cfg "))).toBe(true);
    expect(commentValue(t, "W")).toBe("1.770000000000e+00");
    // the cfg echo's W line must not shadow the spectrum's own W comment
    expect(commentValue(t, "method")).toBe("eigen");
  });

  it("reads the sweep table including empty error fields", () => {
    const t = parseCsv(read("sweep_triangle.csv"), "sweep_triangle.csv");
    expect(t.header[0]).toBe("W");
    expect(t.rows).toHaveLength(40);
    const W = numericColumn(t, "W");
    expect(W[0]).toBeCloseTo(1.76, 12);
    expect(W[39]).toBeCloseTo(13.43, 12);
    // every W strictly increasing
    for (let i = 1; i < W.length; i++) expect(W[i]!).toBeGreaterThan(W[i - 1]!);
  });
});

describe("parseCsv error reporting", () => {
  it("rejects an empty file, citing it", () => {
    expect(() => parseCsv("", "empty.csv")).toThrowError(/empty\.csv.*empty/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseCsv("a,b\n", "bare.csv")).toThrowError(/bare\.csv.*no data rows/);
  });

  it("rejects ragged rows with the line number", () => {
    expect(() => parseCsv("a,b\n1,2\n3\n", "ragged.csv")).toThrowError(
      /ragged\.csv: line 3: expected 2 fields, got 1/,
    );
  });

  it("rejects an unterminated quote", () => {
    expect(() => parseCsv('a,b\n1,"oops\n', "q.csv")).toThrowError(/unterminated/);
  });

  it("unescapes quoted fields", () => {
    const t = parseCsv('a,b\n1,"x, ""y"" z"\n', "q.csv");
    expect(t.rows[0]).toEqual(["1", 'x, "y" z']);
  });
});

describe("toNumber", () => {
  it("accepts scientific notation and nan/inf spellings", () => {
    expect(toNumber("1.25e-03", "f", "c")).toBeCloseTo(0.00125, 12);
    expect(toNumber("-2", "f", "c")).toBe(-2);
    expect(Number.isNaN(toNumber("nan", "f", "c"))).toBe(true);
    expect(toNumber("-inf", "f", "c")).toBe(Number.NEGATIVE_INFINITY);
  });

  it("rejects anything else, naming file and context", () => {
    expect(() => toNumber("три", "sweep.csv", "row 7, column n")).toThrowError(
      /sweep\.csv: row 7, column n/,
    );
    expect(() => toNumber("0x10", "f", "c")).toThrow(CsvError);
    expect(() => toNumber("", "f", "c")).toThrow(CsvError);
  });

  it("reports a missing column with the actual header", () => {
    const t = parseCsv("a,b\n1,2\n", "t.csv");
    expect(() => numericColumn(t, "zz")).toThrowError(/missing column "zz".*a,b/);
  });
});

#!/usr/bin/env node
/**
 * fewatom-figures — render the simulator's CSV/JSON artifacts as SVG.
 *
 *   fewatom-figures spectrum  low.csv [high.csv ...] --out fig.svg
 *   fewatom-figures narrowing sweep.csv summary.json --out fig.svg
 *   fewatom-figures nmax      groups.json            --out fig.svg
 *
 * Exit codes: 0 success, 1 unreadable or ill-formed input (the message
 * names the offending file), 2 usage error. Warnings (e.g. an
 * unbracketed saturation summary) go to standard error; the figure is
 * still written.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseCsv } from "./csv.js";
import {
  plotNarrowing,
  plotNmaxVsN,
  plotSpectrum,
  readNmaxGroups,
  readSweepSummary,
} from "./plots.js";

export interface Io {
  out: (line: string) => void;
  err: (line: string) => void;
}

const USAGE = `usage:
  fewatom-figures spectrum  <spectrum.csv> [more.csv ...] --out <fig.svg>
  fewatom-figures narrowing <sweep.csv> <summary.json>    --out <fig.svg>
  fewatom-figures nmax      <groups.json>                 --out <fig.svg>`;

function readText(path: string): string {
  try {
    return readFileSync(path, "utf8");
  } catch (e) {
    throw new Error(`${path}: ${e instanceof Error ? e.message : String(e)}`);
  }
}

function readJson(path: string): unknown {
  const text = readText(path);
  try {
    return JSON.parse(text);
  } catch (e) {
    throw new Error(`${path}: invalid JSON (${e instanceof Error ? e.message : String(e)})`);
  }
}

function splitArgs(argv: string[]): { positional: string[]; out: string | null } {
  const positional: string[] = [];
  let out: string | null = null;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i]!;
    if (a === "--out") {
      const v = argv[++i];
      if (v === undefined) throw new UsageError("--out needs a path");
      out = v;
    } else if (a.startsWith("--out=")) {
      out = a.slice("--out=".length);
    } else if (a.startsWith("-")) {
      throw new UsageError(`unknown option ${a}`);
    } else {
      positional.push(a);
    }
  }
  return { positional, out };
}

class UsageError extends Error {}

export function main(argv: string[], io: Io = { out: console.log, err: console.error }): number {
  try {
    const [command, ...rest] = argv;
    if (command === undefined || command === "--help" || command === "-h") {
      io.out(USAGE);
      return command === undefined ? 2 : 0;
    }
    const { positional, out } = splitArgs(rest);
    if (out === null) throw new UsageError("--out <fig.svg> is required");

    let svg: string;
    if (command === "spectrum") {
      if (positional.length < 1) throw new UsageError("spectrum needs at least one CSV");
      svg = plotSpectrum(positional.map((p) => parseCsv(readText(p), p)));
    } else if (command === "narrowing") {
      if (positional.length !== 2) {
        throw new UsageError("narrowing needs <sweep.csv> <summary.json>");
      }
      const [csvPath, jsonPath] = positional as [string, string];
      const sweep = parseCsv(readText(csvPath), csvPath);
      const summary = readSweepSummary(readJson(jsonPath), jsonPath);
      const result = plotNarrowing(sweep, summary);
      for (const w of result.warnings) io.err(`fewatom-figures: ${w}`);
      svg = result.svg;
    } else if (command === "nmax") {
      if (positional.length !== 1) throw new UsageError("nmax needs <groups.json>");
      const path = positional[0]!;
      svg = plotNmaxVsN(readNmaxGroups(readJson(path), path));
    } else {
      throw new UsageError(`unknown command ${JSON.stringify(command)}`);
    }

    writeFileSync(out, svg);
    return 0;
  } catch (e) {
    if (e instanceof UsageError) {
      io.err(`fewatom-figures: ${e.message}`);
      io.err(USAGE);
      return 2;
    }
    io.err(`fewatom-figures: ${e instanceof Error ? e.message : String(e)}`);
    return 1;
  }
}

// invoked directly (not imported by a test): run on process argv
const entry = process.argv[1];
if (entry !== undefined && (entry.endsWith("/cli.js") || entry.endsWith("\\cli.js"))) {
  process.exit(main(process.argv.slice(2)));
}

#!/usr/bin/env node
import * as fs from "fs";
import * as path from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { parseBenchCsv, parseDiagramCsv, ParseError } from "./csv.js";
import { plotDiagram } from "./diagram.js";
import { plotBench } from "./bench.js";
import { compareReport } from "./compare.js";

function readFile(p: string): string {
  try {
    return fs.readFileSync(p, "utf-8");
  } catch {
    throw new ParseError(`cannot read ${p}`);
  }
}

function run(fn: () => void): void {
  try {
    fn();
  } catch (err) {
    if (err instanceof ParseError) {
      console.error(`error: ${err.message}`);
      process.exit(1);
    }
    throw err;
  }
}

yargs(hideBin(process.argv))
  .scriptName("report")
  .command(
    "diagram <input>",
    "render a persistence diagram CSV as an SVG scatter",
    (y) =>
      y
        .positional("input", { type: "string", demandOption: true })
        .option("o", { alias: "output", type: "string", demandOption: true }),
    (argv) =>
      run(() => {
        const bars = parseDiagramCsv(readFile(argv.input as string));
        fs.writeFileSync(argv.o as string, plotDiagram(bars));
        console.log(`wrote ${argv.o} (${bars.length} bars)`);
      }),
  )
  .command(
    "bench <input>",
    "render a benchmark CSV as timing curves",
    (y) =>
      y
        .positional("input", { type: "string", demandOption: true })
        .option("o", { alias: "output", type: "string", demandOption: true }),
    (argv) =>
      run(() => {
        const rows = parseBenchCsv(readFile(argv.input as string));
        fs.writeFileSync(argv.o as string, plotBench(rows));
        console.log(`wrote ${argv.o} (${rows.length} rows)`);
      }),
  )
  .command(
    "compare <a> <b> <c>",
    "check three diagram CSVs for multiset equality and render them side by side",
    (y) =>
      y
        .positional("a", { type: "string", demandOption: true })
        .positional("b", { type: "string", demandOption: true })
        .positional("c", { type: "string", demandOption: true })
        .option("o", { alias: "output", type: "string", demandOption: true })
        .option("tol", { type: "number", default: 1e-8 }),
    (argv) =>
      run(() => {
        const files = [argv.a, argv.b, argv.c] as string[];
        const diagrams = files.map((f) => ({
          label: path.basename(f, ".csv"),
          bars: parseDiagramCsv(readFile(f)),
        }));
        const result = compareReport(diagrams, argv.tol as number);
        fs.mkdirSync(argv.o as string, { recursive: true });
        fs.writeFileSync(path.join(argv.o as string, "compare.svg"), result.svg);
        fs.writeFileSync(
          path.join(argv.o as string, "report.txt"),
          result.lines.join("\n") + "\n",
        );
        for (const line of result.lines) console.log(line);
        if (!result.pass) process.exit(2);
      }),
  )
  .demandCommand(1)
  .strict()
  .parse();

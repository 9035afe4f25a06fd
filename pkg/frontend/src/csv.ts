import { z } from "zod";

export class ParseError extends Error {}

export interface Bar {
  degree: number;
  birth: number;
  death: number; // Infinity for essential classes
}

export interface BenchRow {
  scheme: string;
  n: number;
  d: number;
  s: number;
  kind: string;
  seed: number;
  medianSeconds: number;
  simplexCount: number;
}

const barSchema = z.object({
  degree: z.number().int().nonnegative(),
  birth: z.number(),
  death: z.number(),
});

const benchSchema = z.object({
  scheme: z.string().min(1),
  n: z.number().int().positive(),
  d: z.number().int().positive(),
  s: z.number().int().nonnegative(),
  kind: z.string().min(1),
  seed: z.number().int(),
  medianSeconds: z.number().nonnegative(),
  simplexCount: z.number().int().nonnegative(),
});

function splitLines(text: string): string[] {
  return text
    .split("\n")
    .map((ln) => ln.trim())
    .filter((ln) => ln.length > 0);
}

/** Parse `degree,birth,death` CSV; death may be `inf`. */
export function parseDiagramCsv(text: string): Bar[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0].toLowerCase() !== "degree,birth,death") {
    throw new ParseError("diagram CSV must start with degree,birth,death");
  }
  const bars: Bar[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== 3) {
      throw new ParseError(`expected 3 fields, got: ${line}`);
    }
    const death = parts[2].toLowerCase() === "inf" ? Infinity : Number(parts[2]);
    const parsed = barSchema.safeParse({
      degree: Number(parts[0]),
      birth: Number(parts[1]),
      death,
    });
    if (!parsed.success || Number.isNaN(parsed.data.birth) || Number.isNaN(death)) {
      throw new ParseError(`bad diagram row: ${line}`);
    }
    bars.push(parsed.data);
  }
  return bars;
}

const BENCH_HEADER =
  "scheme,n,d,s,kind,seed,median_seconds,simplex_count";

export function parseBenchCsv(text: string): BenchRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0].toLowerCase() !== BENCH_HEADER) {
    throw new ParseError(`benchmark CSV must start with ${BENCH_HEADER}`);
  }
  const rows: BenchRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== 8) {
      throw new ParseError(`expected 8 fields, got: ${line}`);
    }
    const parsed = benchSchema.safeParse({
      scheme: parts[0],
      n: Number(parts[1]),
      d: Number(parts[2]),
      s: Number(parts[3]),
      kind: parts[4],
      seed: Number(parts[5]),
      medianSeconds: Number(parts[6]),
      simplexCount: Number(parts[7]),
    });
    if (!parsed.success) {
      throw new ParseError(`bad benchmark row: ${line}`);
    }
    rows.push(parsed.data);
  }
  return rows;
}

import { Bar } from "./csv.js";
import { plotDiagram } from "./diagram.js";
import { svgDocument, tag } from "./svg.js";

export interface CompareResult {
  pass: boolean;
  lines: string[];
  svg: string;
}

function fmt(b: Bar): string {
  const death = Number.isFinite(b.death) ? b.death.toPrecision(9) : "inf";
  return `H${b.degree} (${b.birth.toPrecision(9)}, ${death})`;
}

function close(a: Bar, b: Bar, tol: number): boolean {
  if (Number.isFinite(a.death) !== Number.isFinite(b.death)) return false;
  const dd = Number.isFinite(a.death) ? Math.abs(a.death - b.death) : 0;
  return Math.abs(a.birth - b.birth) <= tol && dd <= tol;
}

/** Bars shorter than tol are roundoff artifacts: one pipeline emits an
 *  exact-tie pair where another emits a pair a rounding error apart. */
function trim(bars: Bar[], tol: number): Bar[] {
  return bars.filter(
    (b) => !Number.isFinite(b.death) || b.death - b.birth > tol,
  );
}

/** Greedy multiset matching per degree.  Returns the first unmatched
 *  bar, or null when the two diagrams agree within tol. */
function unmatched(rawA: Bar[], rawB: Bar[], tol: number): Bar | null {
  const a = trim(rawA, tol);
  const b = trim(rawB, tol);
  const degrees = new Set([...a, ...b].map((q) => q.degree));
  for (const deg of [...degrees].sort((p, q) => p - q)) {
    const left = a.filter((q) => q.degree === deg);
    const right = b.filter((q) => q.degree === deg);
    if (left.length !== right.length) {
      return (left.length > right.length ? left : right)[0];
    }
    const used = new Array<boolean>(right.length).fill(false);
    for (const bar of left) {
      let hit = -1;
      let best = Infinity;
      right.forEach((cand, j) => {
        if (used[j] || !close(bar, cand, tol)) return;
        const cost = Math.abs(bar.birth - cand.birth) +
          (Number.isFinite(bar.death) ? Math.abs(bar.death - cand.death) : 0);
        if (cost < best) {
          best = cost;
          hit = j;
        }
      });
      if (hit < 0) return bar;
      used[hit] = true;
    }
  }
  return null;
}

/** Side by side diagrams plus one PASS/FAIL line per pairing. */
export function compareReport(
  diagrams: { label: string; bars: Bar[] }[],
  tol = 1e-8,
): CompareResult {
  const lines: string[] = [];
  let pass = true;
  const [base, ...rest] = diagrams;
  for (const other of rest) {
    const badAB = unmatched(base.bars, other.bars, tol);
    const badBA = unmatched(other.bars, base.bars, tol);
    const bad = badAB ?? badBA;
    if (bad === null) {
      lines.push(`PASS ${base.label} vs ${other.label} (tol ${tol})`);
    } else {
      pass = false;
      lines.push(
        `FAIL ${base.label} vs ${other.label}: unmatched bar ${fmt(bad)}`,
      );
    }
  }
  lines.push(pass ? "PASS overall" : "FAIL overall");
  const panes = diagrams.map((d, i) => {
    const inner = plotDiagram(d.bars, d.label)
      .replace(/^<svg[^>]*>\n?/, "")
      .replace(/\n?<\/svg>\n?$/, "");
    return tag("g", { transform: `translate(${i * 490} 0)` }, inner);
  });
  return { pass, lines, svg: svgDocument(490 * diagrams.length, 480, panes) };
}

import { scaleLinear, scaleLog } from "d3-scale";
import { BenchRow, ParseError } from "./csv.js";
import { SERIES_COLOURS, svgDocument, tag, text } from "./svg.js";

const WIDTH = 560;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 20, top: 24, bottom: 52 };

function growthAxis(scheme: string): { key: (r: BenchRow) => number; label: string } {
  if (scheme === "dimension") return { key: (r) => r.d, label: "dimension d" };
  if (scheme === "colours") return { key: (r) => r.s, label: "colour count s" };
  return { key: (r) => r.n, label: "points n" };
}

/** Median build time per filtration kind against the scheme's growing
 *  parameter.  The points scheme spans decades, so it gets log axes. */
export function plotBench(rows: BenchRow[]): string {
  if (rows.length === 0) throw new ParseError("benchmark CSV has no rows");
  const schemes = new Set(rows.map((r) => r.scheme));
  if (schemes.size !== 1) {
    throw new ParseError(`mixed schemes in one chart: ${[...schemes].join(", ")}`);
  }
  const scheme = rows[0].scheme;
  const { key, label } = growthAxis(scheme);
  const logAxes = scheme === "points";

  const xs = rows.map(key);
  const ts = rows.map((r) => r.medianSeconds);
  const tLo = Math.min(...ts);
  const tHi = Math.max(...ts);
  const x = (logAxes ? scaleLog() : scaleLinear())
    .domain([Math.min(...xs), Math.max(...xs) * (logAxes ? 1.05 : 1) + (logAxes ? 0 : 1e-9)])
    .range([MARGIN.left, WIDTH - MARGIN.right]);
  const y = (logAxes ? scaleLog() : scaleLinear())
    .domain([logAxes ? Math.max(tLo, 1e-6) : 0, tHi * 1.1 || 1])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);
  const yv = (t: number) => y(logAxes ? Math.max(t, 1e-6) : t);

  const body: string[] = [];
  body.push(tag("line", {
    x1: MARGIN.left, y1: HEIGHT - MARGIN.bottom,
    x2: WIDTH - MARGIN.right, y2: HEIGHT - MARGIN.bottom, stroke: "black",
  }));
  body.push(tag("line", {
    x1: MARGIN.left, y1: HEIGHT - MARGIN.bottom,
    x2: MARGIN.left, y2: MARGIN.top, stroke: "black",
  }));
  body.push(text(WIDTH / 2, HEIGHT - 12, label, { "text-anchor": "middle" }));
  body.push(text(18, HEIGHT / 2, "median seconds", {
    "text-anchor": "middle",
    transform: `rotate(-90 18 ${HEIGHT / 2})`,
  }));
  body.push(text(WIDTH / 2, 15,
    `scheme=${scheme}${logAxes ? " (log-log)" : ""}`,
    { "text-anchor": "middle" }));

  const kinds = [...new Set(rows.map((r) => r.kind))];
  kinds.forEach((kind, i) => {
    const colour = SERIES_COLOURS[i % SERIES_COLOURS.length];
    const series = rows
      .filter((r) => r.kind === kind)
      .sort((a, b) => key(a) - key(b));
    const pts = series.map((r) => `${x(key(r))},${yv(r.medianSeconds)}`);
    if (pts.length > 1) {
      body.push(tag("polyline", {
        points: pts.join(" "), fill: "none", stroke: colour,
        "stroke-width": 1.5, class: `kind-${kind}`,
      }));
    }
    for (const r of series) {
      body.push(tag("circle", {
        cx: x(key(r)), cy: yv(r.medianSeconds), r: 3,
        fill: colour, class: `kind-${kind}`,
      }));
    }
    body.push(text(WIDTH - MARGIN.right - 110, MARGIN.top + 14 + 15 * i,
      kind, { fill: colour, class: "legend" }));
  });
  return svgDocument(WIDTH, HEIGHT, body);
}

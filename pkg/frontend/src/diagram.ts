import { scaleLinear } from "d3-scale";
import { Bar } from "./csv.js";
import { SERIES_COLOURS, svgDocument, tag, text } from "./svg.js";

const WIDTH = 480;
const HEIGHT = 480;
const MARGIN = { left: 56, right: 20, top: 20, bottom: 48 };

/** Persistence diagram scatter: one colour per degree, points above the
 *  diagonal, infinite deaths drawn as triangles on the top border. */
export function plotDiagram(bars: Bar[], title = "persistence diagram"): string {
  const finite = bars.flatMap((b) =>
    Number.isFinite(b.death) ? [b.birth, b.death] : [b.birth],
  );
  const hi = finite.length ? Math.max(...finite, 0) : 1;
  const top = hi > 0 ? hi * 1.1 : 1;
  const x = scaleLinear()
    .domain([0, top])
    .range([MARGIN.left, WIDTH - MARGIN.right]);
  const y = scaleLinear()
    .domain([0, top])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  const body: string[] = [];
  body.push(
    tag("line", {
      x1: x(0), y1: y(0), x2: x(top), y2: y(top),
      stroke: "#999", "stroke-dasharray": "4 3", class: "diagonal",
    }),
  );
  // axes
  body.push(tag("line", {
    x1: x(0), y1: y(0), x2: x(top), y2: y(0), stroke: "black",
  }));
  body.push(tag("line", {
    x1: x(0), y1: y(0), x2: x(0), y2: y(top), stroke: "black",
  }));
  body.push(text(WIDTH / 2, HEIGHT - 10, "birth", { "text-anchor": "middle" }));
  body.push(text(16, HEIGHT / 2, "death", {
    "text-anchor": "middle",
    transform: `rotate(-90 16 ${HEIGHT / 2})`,
  }));
  body.push(text(WIDTH / 2, 14, title, { "text-anchor": "middle" }));

  const degrees = [...new Set(bars.map((b) => b.degree))].sort((a, b) => a - b);
  degrees.forEach((deg, i) => {
    const colour = SERIES_COLOURS[i % SERIES_COLOURS.length];
    for (const b of bars.filter((q) => q.degree === deg)) {
      if (Number.isFinite(b.death)) {
        body.push(tag("circle", {
          cx: x(b.birth), cy: y(b.death), r: 4,
          fill: colour, "fill-opacity": 0.8, class: `deg-${deg}`,
        }));
      } else {
        // essential class: triangle pinned to the top of the frame
        const cx = x(b.birth);
        const cy = y(top);
        body.push(tag("path", {
          d: `M ${cx - 5} ${cy + 8} L ${cx + 5} ${cy + 8} L ${cx} ${cy} Z`,
          fill: colour, class: `deg-${deg} inf-marker`,
        }));
      }
    }
    body.push(text(WIDTH - MARGIN.right - 70, MARGIN.top + 16 + 16 * i,
      `H${deg}`, { fill: colour, class: "legend" }));
  });
  return svgDocument(WIDTH, HEIGHT, body);
}

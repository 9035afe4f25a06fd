/** Minimal SVG string assembly; attribute maps keep call sites readable. */

export type Attrs = Record<string, string | number>;

export function tag(name: string, attrs: Attrs, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${v}"`)
    .join(" ");
  return body === ""
    ? `<${name} ${parts}/>`
    : `<${name} ${parts}>${body}</${name}>`;
}

export function svgDocument(
  width: number,
  height: number,
  body: string[],
): string {
  const head = tag("rect", {
    x: 0,
    y: 0,
    width,
    height,
    fill: "white",
  });
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    [head, ...body].join("\n") +
    "\n</svg>\n"
  );
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs: Attrs = {},
): string {
  return tag(
    "text",
    { x, y, "font-family": "sans-serif", "font-size": 12, ...attrs },
    content,
  );
}

export const SERIES_COLOURS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

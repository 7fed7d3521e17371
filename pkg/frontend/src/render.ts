/** SVG chart rendering, built as strings so it is testable without a DOM.
 *
 * Conventions match the CLI renderer: an order-3 summand is a dot, order 9 a
 * double circle, order 27 a box containing "3"; top-cell classes render
 * green; classes in the dead set fade to light grey.
 */

import { deadSet } from "./state.js";
import { FixtureChart, LogEntry, parseBidegree } from "./types.js";

const CELL = 22;
const PAD = 30;

export interface RenderOptions {
  label: string;
  log?: LogEntry[];
  topCell?: boolean;
  fadeDead?: boolean;
}

export function renderChart(chart: FixtureChart, opts: RenderOptions): string {
  const bidegrees = Object.keys(chart.classes).map(parseBidegree);
  if (bidegrees.length === 0) {
    return '<svg xmlns="http://www.w3.org/2000/svg" width="40" height="40"></svg>';
  }
  const sMin = Math.min(...bidegrees.map(([s]) => s), 0);
  const sMax = Math.max(...bidegrees.map(([s]) => s));
  const fMax = Math.max(...bidegrees.map(([, f]) => f));
  const width = PAD * 2 + (sMax - sMin + 1) * CELL;
  const height = PAD * 2 + (fMax + 1) * CELL;
  const dead = deadSet(opts.log ?? [], opts.label);
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];
  for (let s = sMin + ((4 - (sMin % 4)) % 4); s <= sMax; s += 4) {
    const x = PAD + (s - sMin) * CELL;
    parts.push(
      `<text x="${x}" y="${height - 8}" font-size="9" text-anchor="middle">${s}</text>`,
    );
  }
  for (let f = 0; f <= fMax; f += 2) {
    const y = height - PAD - f * CELL;
    parts.push(`<text x="8" y="${y + 3}" font-size="9">${f}</text>`);
  }
  const keys = Object.keys(chart.classes).sort((a, b) => {
    const [as, af] = parseBidegree(a);
    const [bs, bf] = parseBidegree(b);
    return as - bs || af - bf;
  });
  for (const key of keys) {
    const [s, f] = parseBidegree(key);
    const x0 = PAD + (s - sMin) * CELL;
    const y0 = height - PAD - f * CELL;
    chart.classes[key].forEach((cls, i) => {
      const x = x0 + (i % 3) * 7;
      const y = y0 - Math.floor(i / 3) * 7;
      const isDead = (opts.fadeDead ?? true) && dead.has(`(${s},${f},${i})`);
      const color = isDead
        ? "#cccccc"
        : (opts.topCell ?? true) && cls.cell === "top"
          ? "green"
          : "black";
      const title = `<title>(${s},${f}) ${cls.name} order ${cls.order}${
        cls.citation ? " [" + cls.citation + "]" : ""
      }</title>`;
      const open = `<g data-ref="(${s},${f},${i})">`;
      if (cls.order === 27) {
        parts.push(
          `${open}${title}<rect x="${x - 5}" y="${y - 5}" width="10" height="10" ` +
            `fill="none" stroke="${color}"/>` +
            `<text x="${x}" y="${y + 3}" font-size="8" text-anchor="middle">3</text></g>`,
        );
      } else if (cls.order === 9) {
        parts.push(
          `${open}${title}<circle cx="${x}" cy="${y}" r="4" fill="none" stroke="${color}"/>` +
            `<circle cx="${x}" cy="${y}" r="2" fill="${color}"/></g>`,
        );
      } else {
        parts.push(`${open}${title}<circle cx="${x}" cy="${y}" r="2.5" fill="${color}"/></g>`);
      }
    });
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** The two justification chains of a contradiction, rendered side by side. */
export function renderContradiction(survive: string[], die: string[]): string {
  const row = (texts: string[], x: number): string =>
    texts
      .map(
        (t, i) =>
          `<text x="${x}" y="${20 + i * 14}" font-size="10">${escapeXml(t)}</text>`,
      )
      .join("\n");
  const width = 640;
  const height = 30 + Math.max(survive.length, die.length) * 14;
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`,
    `<text x="10" y="12" font-size="11" font-weight="bold">survives because</text>`,
    `<text x="330" y="12" font-size="11" font-weight="bold">dies because</text>`,
    row(survive, 10),
    row(die, 330),
    "</svg>",
  ].join("\n");
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

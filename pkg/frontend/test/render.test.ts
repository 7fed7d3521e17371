import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { renderChart, renderContradiction } from "../src/render.js";
import { FixtureChart, LogEntry } from "../src/types.js";

const load = (name: string): FixtureChart =>
  JSON.parse(
    readFileSync(
      fileURLToPath(new URL(`../../src/anss3/fixtures/${name}`, import.meta.url)),
      "utf8",
    ),
  );

describe("renderChart", () => {
  it("renders an empty chart as an empty grid", () => {
    const empty: FixtureChart = {
      target: "S",
      fixture: true,
      complete_stems: [],
      classes: {},
    };
    const svg = renderChart(empty, { label: "S" });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).not.toContain("<circle");
  });

  it("marks top-cell classes green on the mod-3 fixture", () => {
    const svg = renderChart(load("moore_140_144.json"), { label: "S/3" });
    expect(svg).toContain('fill="green"');
    expect(svg).toContain('fill="black"');
  });

  it("renders an order-27 box with a 3 inside", () => {
    const chart: FixtureChart = {
      target: "S",
      fixture: true,
      complete_stems: [],
      classes: { "0,0": [{ name: "x", order: 27 }] },
    };
    const svg = renderChart(chart, { label: "S" });
    expect(svg).toContain("<rect");
    expect(svg).toContain(">3</text>");
  });

  it("renders an order-9 class as a double circle", () => {
    const chart: FixtureChart = {
      target: "S",
      fixture: true,
      complete_stems: [],
      classes: { "4,0": [{ name: "y", order: 9 }] },
    };
    const svg = renderChart(chart, { label: "S" });
    expect(svg).toContain('r="4"');
    expect(svg).toContain('r="2"');
  });

  it("fades classes the log marks dead", () => {
    const sphere = load("sphere_140_144.json");
    const log: LogEntry[] = [
      {
        fact: "dead S (141,15,0) E10",
        rule: "forced-hit",
        premises: [],
        citation: "",
        flags: [],
      },
    ];
    const svg = renderChart(sphere, { label: "S", log });
    const faded = svg
      .split("\n")
      .filter((l) => l.includes('data-ref="(141,15,0)"'));
    expect(faded).toHaveLength(1);
    expect(faded[0]).toContain("#cccccc");
    const alive = svg
      .split("\n")
      .filter((l) => l.includes('data-ref="(141,15,1)"'));
    expect(alive[0]).not.toContain("#cccccc");
  });

  it("includes hover titles with name and citation", () => {
    const svg = renderChart(load("sphere_140_144.json"), { label: "S" });
    expect(svg).toContain("<title>");
    expect(svg).toContain("order 3");
  });
});

describe("renderContradiction", () => {
  it("shows both chains side by side, XML-escaped", () => {
    const svg = renderContradiction(
      ['perm S (34,2,0) "why"'],
      ["d5 S (34,2,0)->(33,7,0)"],
    );
    expect(svg).toContain("survives because");
    expect(svg).toContain("dies because");
    expect(svg).toContain("&quot;why&quot;");
    expect(svg).toContain("-&gt;");
  });
});

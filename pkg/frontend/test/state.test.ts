import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  admissiblePage,
  assertLine,
  chooseTarget,
  deadSet,
  initialState,
  justifications,
  pressPage,
  refToClass,
  selectClass,
  targetCandidates,
} from "../src/state.js";
import { FixtureChart, LogEntry } from "../src/types.js";

const fixturePath = fileURLToPath(
  new URL("../../src/anss3/fixtures/sphere_140_144.json", import.meta.url),
);
const sphere: FixtureChart = JSON.parse(readFileSync(fixturePath, "utf8"));

describe("page admissibility", () => {
  it("accepts 5, 9, 13 and rejects everything else", () => {
    expect(admissiblePage(5)).toBe(true);
    expect(admissiblePage(9)).toBe(true);
    expect(admissiblePage(13)).toBe(true);
    expect(admissiblePage(4)).toBe(false);
    expect(admissiblePage(6)).toBe(false);
    expect(admissiblePage(7)).toBe(false);
    expect(admissiblePage(1)).toBe(false);
  });
});

describe("target candidates", () => {
  it("follow the (s-1, f+r) degree law on the real fixture", () => {
    const cands = targetCandidates(sphere, { s: 143, f: 9, i: 0 }, 5);
    expect(cands.length).toBeGreaterThan(0);
    for (const c of cands) {
      expect(c.s).toBe(142);
      expect(c.f).toBe(14);
    }
  });

  it("are empty for an inadmissible page or an empty bidegree", () => {
    expect(targetCandidates(sphere, { s: 143, f: 9, i: 0 }, 6)).toEqual([]);
    expect(targetCandidates(sphere, { s: 143, f: 9, i: 0 }, 17)).toEqual([]);
  });
});

describe("keyboard assertion flow", () => {
  it("select, press page, choose target produces the script line", () => {
    let state = initialState();
    state = selectClass(state, { s: 143, f: 9, i: 0 });
    state = pressPage(state, sphere, 5);
    expect(state.pending).not.toBeNull();
    const done = chooseTarget(state, "S", { s: 142, f: 14, i: 1 }, "chart UI");
    expect(done).not.toBeNull();
    expect(done!.line).toBe(
      'assert d5 S (143,9,0) -> (142,14,1) cite "chart UI"',
    );
    expect(done!.state.pending).toBeNull();
  });

  it("refuses a target outside the candidate set", () => {
    let state = initialState();
    state = selectClass(state, { s: 143, f: 9, i: 0 });
    state = pressPage(state, sphere, 5);
    expect(chooseTarget(state, "S", { s: 1, f: 1, i: 0 }, "x")).toBeNull();
  });

  it("pressing an inadmissible page leaves the state unchanged", () => {
    let state = initialState();
    state = selectClass(state, { s: 143, f: 9, i: 0 });
    const next = pressPage(state, sphere, 6);
    expect(next).toBe(state);
  });
});

describe("log-derived overlays", () => {
  const log: LogEntry[] = [
    { fact: "dead S (33,7,0) E6", rule: "hit", premises: [], citation: "", flags: [] },
    { fact: "dead S/3 (1,1,0) E6", rule: "hit", premises: [], citation: "", flags: [] },
    { fact: "perm S (10,2,0)", rule: "assert", premises: [], citation: "", flags: [] },
  ];

  it("deadSet filters by chart label", () => {
    expect(deadSet(log, "S")).toEqual(new Set(["(33,7,0)"]));
    expect(deadSet(log, "S/3")).toEqual(new Set(["(1,1,0)"]));
  });

  it("justifications collect facts naming the class", () => {
    const just = justifications(log, "S", { s: 10, f: 2, i: 0 });
    expect(just.map((e) => e.fact)).toEqual(["perm S (10,2,0)"]);
  });
});

describe("class reference parsing", () => {
  it("round-trips through assertLine", () => {
    const src = refToClass("(34,2,0)");
    const tgt = refToClass("(33,7,0)");
    expect(assertLine("S", 5, src, tgt, "toda")).toBe(
      'assert d5 S (34,2,0) -> (33,7,0) cite "toda"',
    );
  });

  it("rejects malformed references", () => {
    expect(() => refToClass("34,2,0")).toThrow();
  });
});

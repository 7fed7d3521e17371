/** Wire types shared with the deduction service. */

export interface FixtureClass {
  name: string;
  order: number;
  cell?: "bottom" | "top";
  citation?: string;
  ilink?: [number, number, number];
  jlink?: [number, number, number | "*"];
}

export interface FixtureChart {
  target: string;
  fixture: boolean;
  description?: string;
  complete_stems: number[];
  /** keyed "s,f" */
  classes: Record<string, FixtureClass[]>;
  empty?: { s: number; f: number; citation?: string }[];
  products?: {
    a: [number, number, number];
    b: [number, number, number];
    result: [number, number, number] | 0;
    citation?: string;
  }[];
}

export interface ChartInfo {
  id: string;
  target: string;
  fixture: boolean;
  loaded: boolean;
}

export interface LogEntry {
  fact: string;
  rule: string;
  premises: string[];
  citation: string;
  flags: string[];
}

export interface ClaimResult {
  line: string;
  proven: boolean;
  detail: string;
  flags: string[];
}

export interface AssertResponse {
  new_facts: LogEntry[];
  claims: ClaimResult[];
}

export interface ContradictionDetail {
  message: string;
  survive_chain: string[];
  die_chain: string[];
}

/** A class position in a chart: stem, filtration, generator index. */
export interface ClassRef {
  s: number;
  f: number;
  i: number;
}

export function refKey(r: ClassRef): string {
  return `(${r.s},${r.f},${r.i})`;
}

export function parseBidegree(key: string): [number, number] {
  const [s, f] = key.split(",").map(Number);
  return [s, f];
}

/** View state: selection, pending assertion, and log-derived overlays.
 *
 * The view is a pure function of (chart JSON, derivation log): every dead
 * marking traces to a log fact and every target candidate is computed from
 * the differential degree law, never guessed.
 */

import { ClassRef, FixtureChart, LogEntry, refKey } from "./types.js";

export function refToClass(text: string): ClassRef {
  const m = text.match(/^\((-?\d+),(\d+),(\d+)\)$/);
  if (!m) throw new Error(`bad class reference: ${text}`);
  return { s: Number(m[1]), f: Number(m[2]), i: Number(m[3]) };
}

/** d_r shifts (s, f) to (s - 1, f + r); only r >= 5 with r = 1 mod 4 occur. */
export function admissiblePage(r: number): boolean {
  return r >= 5 && r % 4 === 1;
}

export function targetBidegree(source: ClassRef, r: number): [number, number] {
  return [source.s - 1, source.f + r];
}

export function classesAt(chart: FixtureChart, s: number, f: number): ClassRef[] {
  const group = chart.classes[`${s},${f}`] ?? [];
  return group.map((_, i) => ({ s, f, i }));
}

/** Candidate targets for an asserted d_r from `source`. */
export function targetCandidates(
  chart: FixtureChart,
  source: ClassRef,
  r: number,
): ClassRef[] {
  if (!admissiblePage(r)) return [];
  const [s, f] = targetBidegree(source, r);
  return classesAt(chart, s, f);
}

export interface PendingAssertion {
  source: ClassRef;
  page: number;
  candidates: ClassRef[];
}

export interface ViewState {
  chartId: string | null;
  selected: ClassRef | null;
  pending: PendingAssertion | null;
  overlays: { topCell: boolean; fadeDead: boolean; arrows: boolean };
}

export function initialState(): ViewState {
  return {
    chartId: null,
    selected: null,
    pending: null,
    overlays: { topCell: true, fadeDead: true, arrows: true },
  };
}

/** Keyboard flow: click/select a source class first. */
export function selectClass(state: ViewState, ref: ClassRef): ViewState {
  return { ...state, selected: ref, pending: null };
}

/** Then press the page digit (5, 9, ...) to arm the assertion. */
export function pressPage(
  state: ViewState,
  chart: FixtureChart,
  r: number,
): ViewState {
  if (!state.selected || !admissiblePage(r)) return state;
  const candidates = targetCandidates(chart, state.selected, r);
  if (candidates.length === 0) return state;
  return { ...state, pending: { source: state.selected, page: r, candidates } };
}

/** Finally pick a target; produces the script line the server executes. */
export function chooseTarget(
  state: ViewState,
  label: string,
  target: ClassRef,
  citation: string,
): { state: ViewState; line: string } | null {
  const pending = state.pending;
  if (!pending) return null;
  if (!pending.candidates.some((c) => refKey(c) === refKey(target))) return null;
  const line = assertLine(label, pending.page, pending.source, target, citation);
  return { state: { ...state, pending: null }, line };
}

export function assertLine(
  label: string,
  r: number,
  source: ClassRef,
  target: ClassRef,
  citation: string,
): string {
  return `assert d${r} ${label} ${refKey(source)} -> ${refKey(target)} cite "${citation}"`;
}

/** Classes marked dead by the derivation log, for the given chart label. */
export function deadSet(log: LogEntry[], label: string): Set<string> {
  const out = new Set<string>();
  const re = new RegExp(`^dead ${escapeRe(label)} (\\(-?\\d+,\\d+,\\d+\\)) E\\d+$`);
  for (const entry of log) {
    const m = entry.fact.match(re);
    if (m) out.add(m[1]);
  }
  return out;
}

/** Facts justifying one class's current marking (for the hover panel). */
export function justifications(
  log: LogEntry[],
  label: string,
  ref: ClassRef,
): LogEntry[] {
  const needle = `${label} ${refKey(ref)}`;
  return log.filter((e) => e.fact.includes(needle));
}

function escapeRe(s: string): string {
  return s.replace(/[.*+?^${}()|[\]\\/]/g, "\\$&");
}

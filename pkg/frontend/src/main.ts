/** Browser wiring: chart picker, keyboard assertion flow, log panel.
 *
 * All mathematics happens server-side; this file only turns DOM events into
 * script lines and re-renders from (chart JSON, derivation log).
 */

import { ApiClient, ContradictionError } from "./client.js";
import { renderChart, renderContradiction } from "./render.js";
import {
  ViewState,
  chooseTarget,
  initialState,
  pressPage,
  refToClass,
  selectClass,
} from "./state.js";
import { FixtureChart, LogEntry } from "./types.js";

const api = new ApiClient("");

let state: ViewState = initialState();
let chart: FixtureChart | null = null;
let chartId = "";
let log: LogEntry[] = [];

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function refresh(): Promise<void> {
  log = await api.logEntries();
  if (chart) {
    el("chart").innerHTML = renderChart(chart, {
      label: chart.target,
      log,
      topCell: state.overlays.topCell,
      fadeDead: state.overlays.fadeDead,
    });
    el("chart")
      .querySelectorAll<SVGGElement>("g[data-ref]")
      .forEach((g) => g.addEventListener("click", () => onClassClick(g.dataset.ref!)));
  }
  el("log").textContent = log
    .map((e) => `${e.fact}  [${e.rule}]` + (e.flags.length ? `  {${e.flags}}` : ""))
    .join("\n");
  el("status").textContent = state.pending
    ? `d${state.pending.page} from ${JSON.stringify(state.pending.source)}: pick a target`
    : state.selected
      ? `selected ${JSON.stringify(state.selected)}; press 5 or 9`
      : "select a class";
}

function onClassClick(refText: string): void {
  const ref = refToClass(refText);
  if (!chart) return;
  if (state.pending) {
    const done = chooseTarget(state, chart.target, ref, "asserted in chart UI");
    if (done) {
      state = done.state;
      void submit(done.line);
      return;
    }
  }
  state = selectClass(state, ref);
  void refresh();
}

async function submit(line: string): Promise<void> {
  try {
    await api.assertLine(line);
    el("error").innerHTML = "";
  } catch (err) {
    if (err instanceof ContradictionError) {
      el("error").innerHTML = renderContradiction(
        err.detail.survive_chain,
        err.detail.die_chain,
      );
    } else {
      el("error").textContent = String(err);
    }
  }
  await refresh();
}

async function loadChart(id: string): Promise<void> {
  chartId = id;
  chart = await api.chart(id);
  await api.assertLine(`chart ${chart.target} fixture ${chartId}`).catch(() => {
    /* already loaded in this session: fine */
  });
  state = initialState();
  state.chartId = id;
  await refresh();
}

async function init(): Promise<void> {
  const picker = el("picker") as HTMLSelectElement;
  for (const info of await api.charts()) {
    const opt = document.createElement("option");
    opt.value = info.id;
    opt.textContent = `${info.target} — ${info.id}`;
    picker.appendChild(opt);
  }
  picker.addEventListener("change", () => void loadChart(picker.value));
  document.addEventListener("keydown", (ev) => {
    if (!chart) return;
    if (ev.key === "5" || ev.key === "9") {
      state = pressPage(state, chart, Number(ev.key));
      void refresh();
    } else if (ev.key === "Escape") {
      state = { ...state, pending: null, selected: null };
      void refresh();
    } else if (ev.key === "u") {
      void api.undo().then(refresh);
    }
  });
  (el("export") as HTMLButtonElement).addEventListener("click", async () => {
    const text = await api.session();
    const blob = new Blob([text], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "session.ssd";
    a.click();
  });
  if (picker.options.length > 0) {
    picker.value = picker.options[0].value;
    await loadChart(picker.value);
  }
}

void init();

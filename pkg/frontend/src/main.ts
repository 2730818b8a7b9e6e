/** Application entry: connect to a service, create a session from a file,
 * and dock the coordinated views. */

import { Api } from "./api.js";
import { Store } from "./state.js";
import { View, toast } from "./views/base.js";
import { ControlPanelView } from "./views/controlPanel.js";
import { BandwidthView, HeatmapView, RejectionCurveView, RocPrView } from "./views/curvesViews.js";
import { FeatureHistogramView, FocusView, ListView, ScatterView } from "./views/itemViews.js";
import { MetricsTableView } from "./views/metricsTable.js";
import { PerfConfView } from "./views/perfConf.js";
import { ReliabilityView } from "./views/reliability.js";
import { TrinaryView } from "./views/trinary.js";
import { el } from "./svg.js";

const VIEW_FACTORY: Record<string, (store: Store) => View> = {
  "control-panel": (store) => new ControlPanelView(store),
  "metrics-table": (store) => new MetricsTableView(store),
  trinary: (store) => new TrinaryView(store),
  "perf-conf": (store) => new PerfConfView(store),
  reliability: (store) => new ReliabilityView(store),
  "roc-pr": (store) => new RocPrView(store),
  arc: (store) => new RejectionCurveView(store),
  "bandwidth-assess": (store) => new BandwidthView(store),
  heatmap: (store) => new HeatmapView(store),
  scatter: (store) => new ScatterView(store),
  "feature-histogram": (store) => new FeatureHistogramView(store),
  list: (store) => new ListView(store),
  focus: (store) => new FocusView(store),
};

const DEFAULT_LAYOUT = [
  "control-panel", "metrics-table", "trinary", "perf-conf", "reliability",
  "roc-pr", "arc", "bandwidth-assess", "heatmap", "scatter",
  "feature-histogram", "list", "focus",
];

export function boot(root: HTMLElement, serviceBase: string): Store {
  const api = new Api(serviceBase);
  const store = new Store(api);

  const bar = el("div", { class: "connect-bar" });
  const fileInput = el("input", { type: "file", accept: ".json,.csv" });
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      const text = await file.text();
      const payload = file.name.endsWith(".csv") ? text : JSON.parse(text);
      const created = await api.createSession(payload);
      await connectTo(created.session);
    } catch (error) {
      toast(error instanceof Error ? error.message : String(error));
    }
  });
  const sessionInput = el("input", {
    type: "text",
    placeholder: "session id",
    class: "session-input",
  });
  const connectButton = el("button", {}, "connect");
  connectButton.addEventListener("click", () => void connectTo(sessionInput.value.trim()));
  bar.append(
    el("span", { class: "muted" }, "load dataset "),
    fileInput,
    el("span", { class: "muted" }, " or attach "),
    sessionInput,
    connectButton,
  );
  root.appendChild(bar);

  const dock = el("div", { class: "dock" });
  root.appendChild(dock);
  const mounted: View[] = [];

  async function connectTo(session: string) {
    if (!session) return;
    for (const view of mounted.splice(0)) view.unmount();
    try {
      await store.connect(session);
    } catch (error) {
      toast(error instanceof Error ? error.message : String(error));
      return;
    }
    for (const kind of DEFAULT_LAYOUT) {
      mounted.push(VIEW_FACTORY[kind](store).mount(dock));
    }
  }

  return store;
}

declare global {
  interface Window {
    trinbenchBoot?: typeof boot;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.trinbenchBoot = boot;
  const root = document.getElementById("app");
  if (root) {
    const base = new URLSearchParams(window.location.search).get("service") ?? "";
    boot(root, base);
  }
}

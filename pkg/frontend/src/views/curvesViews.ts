/** Trade-off curve views: ROC/PR (toggle), the accuracy-rejection curve,
 * the bandwidth-assessment chart, and the dual-threshold heatmap. Clicking
 * a curve point or heatmap cell applies that operating point. */

import {
  BandwidthSeriesWire,
  CurveSeriesWire,
  HeatmapCellWire,
} from "../api.js";
import { Store } from "../state.js";
import { FOCUS_COLOR, el, scale, svg } from "../svg.js";
import { View, runAction } from "./base.js";

const W = 300;
const H = 210;
const PALETTE = ["#4264d0", "#3fae72", "#8e44ad", "#c0392b"];

function lineChart(
  series: CurveSeriesWire[],
  xLabel: string,
  yLabel: string,
  onPointClick?: (point: { x: number; y: number; param: number | null }, label: string) => void,
): SVGElement {
  const chart = svg("svg", { width: W, height: H });
  const xFor = scale(0, 1, 30, W - 8);
  const yFor = scale(0, 1, H - 24, 8);
  chart.appendChild(svg("line", { x1: xFor(0), y1: yFor(0), x2: xFor(1), y2: yFor(0), stroke: "#ccc" }));
  chart.appendChild(svg("line", { x1: xFor(0), y1: yFor(0), x2: xFor(0), y2: yFor(1), stroke: "#ccc" }));
  chart.appendChild(svg("text", { x: W / 2, y: H - 6, class: "axis-label" })).textContent = xLabel;
  chart.appendChild(svg("text", { x: 4, y: 12, class: "axis-label" })).textContent = yLabel;
  series.forEach((s, index) => {
    const color = PALETTE[index % PALETTE.length];
    const defined = s.points.filter((p) => !p.undefined);
    chart.appendChild(
      svg("path", {
        d: defined.map((p, k) => `${k ? "L" : "M"}${xFor(p.x)},${yFor(p.y)}`).join(""),
        fill: "none",
        stroke: color,
        "stroke-width": 1.6,
        "data-series": s.label,
      }),
    );
    if (onPointClick) {
      for (const p of defined) {
        const dot = svg("circle", {
          cx: xFor(p.x), cy: yFor(p.y), r: 3,
          fill: color, "fill-opacity": 0.55, class: "curve-point",
          "data-param": p.param ?? "",
        });
        dot.addEventListener("click", () => onPointClick(p, s.label));
        chart.appendChild(dot);
      }
    }
  });
  return chart;
}

export class RocPrView extends View {
  mode: "roc" | "pr" = "roc";

  constructor(store: Store) {
    super(store, "ROC / PR", "roc-pr");
  }

  protected fetchData(): Promise<{ series: CurveSeriesWire[] }> {
    return this.store.api.curves(this.store.session, this.mode);
  }

  protected render(data: { series: CurveSeriesWire[] }): void {
    const toggle = el("button", { class: "mode-toggle" }, this.mode.toUpperCase());
    toggle.addEventListener("click", () => {
      this.mode = this.mode === "roc" ? "pr" : "roc";
      void this.refresh();
    });
    this.body.appendChild(toggle);
    const labels = this.mode === "roc" ? ["FPR", "TPR"] : ["recall", "precision"];
    this.body.appendChild(
      lineChart(data.series, labels[0], labels[1], (point, label) => {
        // choosing a point on the trade-off curve sets that threshold
        if (point.param !== null) {
          runAction(this.store.setOperatingPoint(label, point.param, point.param));
        }
      }) as unknown as Node,
    );
  }
}

export class RejectionCurveView extends View {
  metric = "accuracy";
  threshold = 0.5;

  constructor(store: Store) {
    super(store, "rejection curve", "arc");
  }

  protected fetchData(): Promise<{ series: CurveSeriesWire[] }> {
    return this.store.api.curves(this.store.session, "arc", {
      metric: this.metric,
      threshold: this.threshold,
      steps: 51,
    });
  }

  protected render(data: { series: CurveSeriesWire[] }): void {
    const picker = el("select", { class: "metric-picker" });
    for (const m of ["accuracy", "precision", "recall", "f1", "mcc"]) {
      const option = el("option", { value: m }, m);
      if (m === this.metric) option.setAttribute("selected", "selected");
      picker.appendChild(option);
    }
    picker.addEventListener("change", () => {
      this.metric = picker.value;
      void this.refresh();
    });
    this.body.appendChild(picker);
    this.body.appendChild(
      lineChart(data.series, "rejection rate", this.metric, (point, label) => {
        // choosing a rejection rate applies the band that produced it
        if (point.param !== null) {
          runAction(
            this.store.setOperatingPoint(
              label,
              Math.max(0, this.threshold - point.param),
              Math.min(1, this.threshold + point.param),
            ),
          );
        }
      }) as unknown as Node,
    );
  }
}

export class BandwidthView extends View {
  metric = "accuracy";
  bandwidths = "0.05,0.1,0.2";

  constructor(store: Store) {
    super(store, "bandwidth assessment", "bandwidth-assess");
  }

  protected fetchData(): Promise<{ series: BandwidthSeriesWire[] }> {
    return this.store.api.curves(this.store.session, "bandwidth", {
      metric: this.metric,
      bandwidths: this.bandwidths,
      resolution: 40,
    });
  }

  protected render(data: { series: BandwidthSeriesWire[] }): void {
    for (const series of data.series) {
      const chart = svg("svg", { width: W, height: H, "data-classifier": series.label });
      const xFor = scale(0, 1, 30, W - 8);
      const yFor = scale(0, 1, H - 24, 8);
      // error-bar glyphs: upper mark = rejected-as-correct, lower = as-incorrect
      series.bands.forEach((band, bandIndex) => {
        series.thresholds.forEach((t, k) => {
          if (band.upper[k].undefined || band.lower[k].undefined) return;
          chart.appendChild(
            svg("line", {
              x1: xFor(t), y1: yFor(band.upper[k].value),
              x2: xFor(t), y2: yFor(band.lower[k].value),
              stroke: PALETTE[bandIndex % PALETTE.length],
              "stroke-opacity": 0.45,
              class: "band-whisker",
              "data-bandwidth": band.bandwidth,
            }),
          );
        });
      });
      const defined = series.thresholds
        .map((t, k) => ({ t, v: series.center[k], k }))
        .filter((d) => !d.v.undefined);
      chart.appendChild(
        svg("path", {
          d: defined.map((d, k) => `${k ? "L" : "M"}${xFor(d.t)},${yFor(d.v.value)}`).join(""),
          fill: "none",
          stroke: "#222",
          "stroke-width": 1.4,
          class: "center-line",
        }),
      );
      for (const d of defined) {
        const dot = svg("circle", {
          cx: xFor(d.t), cy: yFor(d.v.value), r: 2.6, fill: "#222",
          class: "curve-point", "data-threshold": d.t,
        });
        dot.addEventListener("click", () =>
          runAction(this.store.setOperatingPoint(series.label, d.t, d.t)),
        );
        chart.appendChild(dot);
      }
      const title = el("div", { class: "chart-title" }, `${series.label} (${this.metric})`);
      this.body.append(title, chart as unknown as Node);
    }
  }
}

export class HeatmapView extends View {
  metric = "accuracy";
  resolution = 20;

  constructor(store: Store) {
    super(store, "threshold heatmap", "heatmap");
  }

  protected fetchData(): Promise<{ label: string; cells: HeatmapCellWire[] }> {
    const classifier = this.store.classifiers[0]?.name ?? "";
    return this.store.api.curves(this.store.session, "heatmap", {
      classifier,
      metric: this.metric,
      resolution: this.resolution,
    });
  }

  protected render(data: { label: string; cells: HeatmapCellWire[] }): void {
    const chart = svg("svg", { width: W, height: H, "data-classifier": data.label });
    const xFor = scale(0, 1, 30, W - 8);
    const yFor = scale(0, 1, H - 24, 8);
    const defined = data.cells.filter((c) => !c.undefined);
    const lo = Math.min(...defined.map((c) => c.value), 0);
    const hi = Math.max(...defined.map((c) => c.value), 1);
    for (const cell of data.cells) {
      // coverage maps to radius so high-rejection settings recede;
      // below-chance values get the muted ramp
      const fraction = (cell.value - lo) / (hi - lo || 1);
      const color = cell.undefined
        ? "#ddd"
        : fraction >= 0.5
          ? `hsl(${40 + (fraction - 0.5) * 160},85%,55%)`
          : `hsl(220,10%,${40 + fraction * 40}%)`;
      const dot = svg("circle", {
        cx: xFor(cell.lower),
        cy: yFor(cell.upper),
        r: 1.2 + cell.coverage * 4.2,
        fill: color,
        class: "heat-cell",
        "data-lower": cell.lower,
        "data-upper": cell.upper,
        "data-value": cell.value,
        "data-coverage": cell.coverage,
      });
      dot.addEventListener("click", () =>
        runAction(this.store.setOperatingPoint(data.label, cell.lower, cell.upper)),
      );
      chart.appendChild(dot);
    }
    const current = this.store.classifiers.find((c) => c.name === data.label);
    if (current) {
      chart.appendChild(
        svg("circle", {
          cx: xFor(current.operating_point.lower),
          cy: yFor(current.operating_point.upper),
          r: 7,
          fill: "none",
          stroke: FOCUS_COLOR,
          "stroke-width": 2,
          class: "current-op-marker",
        }),
      );
    }
    this.body.appendChild(chart as unknown as Node);
  }
}

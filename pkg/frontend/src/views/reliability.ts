/** Reliability view: calibration line (mean score vs fraction positive or
 * percent correct) over the identity reference, with the per-bin count bar
 * chart underneath. Count bars are clickable score-range selections; the
 * focus item appears at its score on the x axis. */

import { ReliabilityBinWire, exprs } from "../api.js";
import { Store } from "../state.js";
import { FOCUS_COLOR, el, scale, svg } from "../svg.js";
import { View, runAction } from "./base.js";

const WIDTH = 320;
const CURVE_H = 150;
const BARS_H = 46;

interface Series {
  label: string;
  bins: ReliabilityBinWire[];
}

export class ReliabilityView extends View {
  bins = 10;
  mode: "fraction-positive" | "percent-correct" = "fraction-positive";

  constructor(store: Store) {
    super(store, "reliability", "reliability");
  }

  protected fetchData(): Promise<{ series: Series[] }> {
    return this.store.api.curves(this.store.session, "reliability", {
      bins: this.bins,
      mode: this.mode,
    });
  }

  protected render(data: { series: Series[] }): void {
    const toggle = el("button", { class: "mode-toggle" }, `y: ${this.mode}`);
    toggle.addEventListener("click", () => {
      this.mode = this.mode === "fraction-positive" ? "percent-correct" : "fraction-positive";
      void this.refresh();
    });
    this.body.appendChild(toggle);

    const chart = svg("svg", { width: WIDTH, height: CURVE_H + BARS_H + 12 });
    const xFor = scale(0, 1, 28, WIDTH - 8);
    const yFor = scale(0, 1, CURVE_H, 10);
    chart.appendChild(
      svg("line", {
        x1: xFor(0), y1: yFor(0), x2: xFor(1), y2: yFor(1),
        class: "identity-line", stroke: "#bbb", "stroke-dasharray": "4 3",
      }),
    );

    const palette = ["#4264d0", "#3fae72", "#8e44ad", "#c0392b"];
    data.series.forEach((series, index) => {
      const defined = series.bins.filter((b) => !b.undefined);
      const path = defined
        .map((b, k) => `${k ? "L" : "M"}${xFor(b.x)},${yFor(b.y)}`)
        .join("");
      chart.appendChild(
        svg("path", {
          d: path,
          fill: "none",
          stroke: palette[index % palette.length],
          "stroke-width": 1.6,
          class: "reliability-line",
          "data-classifier": series.label,
        }),
      );
      for (const bin of defined) {
        chart.appendChild(
          svg("circle", {
            cx: xFor(bin.x), cy: yFor(bin.y), r: 2.5,
            fill: palette[index % palette.length],
          }),
        );
      }
    });

    // count bars for the first series; each is a selectable score range
    const first = data.series[0];
    if (first) {
      const maxCount = Math.max(1, ...first.bins.map((b) => b.count));
      for (const bin of first.bins) {
        const h = (bin.count / maxCount) * (BARS_H - 6);
        const bar = svg("rect", {
          x: xFor(bin.lo) + 1,
          y: CURVE_H + 10 + (BARS_H - 6 - h),
          width: xFor(bin.hi) - xFor(bin.lo) - 2,
          height: Math.max(h, bin.count > 0 ? 1 : 0),
          fill: "#9fb6cc",
          class: "count-bar",
          "data-bin": bin.param,
          "data-count": bin.count,
        });
        bar.addEventListener("click", () =>
          runAction(
            this.store.selectExpr(
              exprs.scoreBin(first.label, bin.lo, bin.hi, bin.param),
              "A",
              `${first.label} scores [${bin.lo}, ${bin.hi})`,
            ),
          ),
        );
        chart.appendChild(bar);
      }
      const focusScore = this.store.focusScore(first.label);
      if (focusScore !== null) {
        chart.appendChild(
          svg("circle", {
            cx: xFor(focusScore),
            cy: CURVE_H + 6,
            r: 5,
            fill: FOCUS_COLOR,
            class: "focus-marker",
            "data-x": focusScore,
          }),
        );
      }
    }
    this.body.appendChild(chart as unknown as Node);
  }
}

/** Performance-confidence histogram: vertical stacked bars of outcome
 * counts per score bin. Clicking a segment selects that (score-bin AND
 * outcome) set into slot A; the focus item renders as a yellow dot over
 * its bin. */

import { CATEGORIES, Category, PerfConfEntry, exprs } from "../api.js";
import { Store } from "../state.js";
import {
  CATEGORY_COLORS,
  FOCUS_COLOR,
  SLOT_COLORS,
  SMALL_BAR_PX,
  el,
  scale,
  svg,
} from "../svg.js";
import { View, runAction } from "./base.js";

const WIDTH = 340;
const HEIGHT = 190;
const BASE = HEIGHT - 18;

export class PerfConfView extends View {
  bins = 10;

  constructor(store: Store) {
    super(store, "performance / confidence", "perf-conf");
  }

  protected fetchData(): Promise<{ series: PerfConfEntry[] }> {
    return this.store.api.curves(this.store.session, "perf-conf", { bins: this.bins });
  }

  protected render(data: { series: PerfConfEntry[] }): void {
    for (const entry of data.series) this.body.appendChild(this.renderChart(entry));
  }

  private renderChart(entry: PerfConfEntry): HTMLElement {
    const container = el("div", { class: "perf-conf-chart", "data-classifier": entry.label });
    container.appendChild(el("div", { class: "chart-title" }, entry.label));
    const chart = svg("svg", { width: WIDTH, height: HEIGHT });
    const maxTotal = Math.max(1, ...entry.bins.map((b) => b.total));
    const xFor = scale(0, entry.bins.length, 24, WIDTH - 4);
    const hFor = (count: number) => (count / maxTotal) * (BASE - 24);
    const barWidth = (WIDTH - 28) / entry.bins.length - 3;

    for (const bin of entry.bins) {
      const x = xFor(bin.bin);
      let y = BASE;
      for (const category of CATEGORIES) {
        const count = bin.counts[category];
        if (count <= 0) continue;
        const h = hFor(count);
        y -= h;
        const seg = svg("rect", {
          x,
          y,
          width: barWidth,
          height: Math.max(h, 0.5),
          fill: CATEGORY_COLORS[category],
          class: "segment",
          "data-bin": bin.bin,
          "data-category": category,
          "data-count": count,
        });
        seg.addEventListener("click", () => this.selectSegment(entry.label, bin.bin, category, bin.lo, bin.hi));
        chart.appendChild(seg);
        if (h < SMALL_BAR_PX) {
          const glyph = svg("circle", {
            cx: x + barWidth / 2,
            cy: y - 4,
            r: 3.5,
            fill: CATEGORY_COLORS[category],
            class: "small-glyph",
            "data-bin": bin.bin,
            "data-category": category,
          });
          glyph.addEventListener("click", () =>
            this.selectSegment(entry.label, bin.bin, category, bin.lo, bin.hi),
          );
          chart.appendChild(glyph);
        }
      }
      // slot overlap stripes under the axis
      let stripeY = BASE + 3;
      for (const slot of ["A", "B"] as const) {
        const perCategory = entry.overlaps[slot]?.[bin.bin];
        const overlap = perCategory ? perCategory.reduce((a, b) => a + b, 0) : 0;
        if (overlap > 0) {
          chart.appendChild(
            svg("rect", {
              x,
              y: stripeY,
              width: Math.max((overlap / maxTotal) * (barWidth * 2), 2),
              height: 3,
              fill: SLOT_COLORS[slot],
              class: `overlap overlap-${slot}`,
            }),
          );
        }
        stripeY += 4;
      }
    }

    // focus marker: yellow dot above the focus item's score bin
    const focusScore = this.store.focusScore(entry.label);
    if (focusScore !== null) {
      const bin = Math.min(Math.floor(focusScore * this.bins), this.bins - 1);
      chart.appendChild(
        svg("circle", {
          cx: xFor(bin) + barWidth / 2,
          cy: 10,
          r: 5,
          fill: FOCUS_COLOR,
          class: "focus-marker",
          "data-bin": bin,
        }),
      );
    }
    container.appendChild(chart as unknown as Node);
    return container;
  }

  private selectSegment(
    classifier: string,
    bin: number,
    category: Category,
    lo: number,
    hi: number,
  ): void {
    runAction(
      this.store.selectExpr(
        exprs.binSegment(classifier, lo, hi, bin, category),
        "A",
        `${classifier} bin ${bin} ${category}`,
      ),
    );
  }
}

/** Stacked per-classifier summary of the five outcome categories with two
 * stack orderings: correctness mode groups right and wrong answers, score
 * mode groups positive and negative predictions. Segments are clickable
 * (outcome predicate into slot A) and show slot overlaps as side stripes. */

import { Category, TrinaryEntry, exprs } from "../api.js";
import { Store } from "../state.js";
import {
  CATEGORY_COLORS,
  SLOT_COLORS,
  SMALL_BAR_PX,
  clear,
  el,
  svg,
} from "../svg.js";
import { View, runAction } from "./base.js";

const ORDERINGS: Record<string, Category[]> = {
  correctness: ["TP", "TN", "Rejected", "FP", "FN"],
  score: ["TP", "FP", "Rejected", "TN", "FN"],
};

export class TrinaryView extends View {
  mode: "correctness" | "score" = "correctness";
  private width = 420;
  private barHeight = 34;

  constructor(store: Store) {
    super(store, "trinary summary", "trinary");
  }

  protected fetchData(): Promise<{ series: TrinaryEntry[] }> {
    return this.store.api.curves(this.store.session, "trinary-summary");
  }

  protected render(data: { series: TrinaryEntry[] }): void {
    const toggle = el("button", { class: "mode-toggle" }, `mode: ${this.mode}`);
    toggle.addEventListener("click", () => {
      this.mode = this.mode === "correctness" ? "score" : "correctness";
      void this.refresh();
    });
    this.body.appendChild(toggle);

    const chart = svg("svg", {
      width: this.width,
      height: data.series.length * (this.barHeight + 26) + 8,
      class: "trinary-chart",
    });
    data.series.forEach((entry, index) => {
      chart.appendChild(this.renderBar(entry, index));
    });
    this.body.appendChild(chart as unknown as Node);
  }

  private renderBar(entry: TrinaryEntry, index: number): SVGElement {
    const group = svg("g", {
      transform: `translate(0,${index * (this.barHeight + 26)})`,
      "data-classifier": entry.label,
    });
    group.appendChild(
      svg("text", { x: 0, y: 14, class: "bar-label" }),
    ).textContent = entry.label;

    const counts = entry.counts;
    const byCategory: Record<Category, number> = {
      TP: counts.tp,
      FP: counts.fp,
      TN: counts.tn,
      FN: counts.fn,
      Rejected: counts.rejected,
    };
    const total = counts.total || 1;
    let x = 0;
    for (const category of ORDERINGS[this.mode]) {
      const value = byCategory[category];
      const w = (value / total) * this.width;
      if (value <= 0) continue;
      const seg = svg("rect", {
        x,
        y: 18,
        width: Math.max(w, 0.5),
        height: this.barHeight,
        fill: CATEGORY_COLORS[category],
        class: "segment",
        "data-category": category,
        "data-value": value,
      });
      seg.addEventListener("click", () =>
        runAction(
          this.store.selectExpr(
            exprs.outcome(entry.label, category),
            "A",
            `${entry.label} ${category}`,
          ),
        ),
      );
      group.appendChild(seg);
      if (w < SMALL_BAR_PX) {
        // small but nonzero: add a selectable circular glyph
        const glyph = svg("circle", {
          cx: x + w / 2,
          cy: 12,
          r: 4,
          fill: CATEGORY_COLORS[category],
          class: "small-glyph",
          "data-category": category,
        });
        glyph.addEventListener("click", () =>
          runAction(this.store.selectExpr(exprs.outcome(entry.label, category), "A")),
        );
        group.appendChild(glyph);
      }
      // slot overlap stripes under the segment
      let stripeY = 18 + this.barHeight + 2;
      for (const slot of ["A", "B"] as const) {
        const overlap = entry.overlaps[slot]?.[category] ?? 0;
        if (overlap > 0) {
          group.appendChild(
            svg("rect", {
              x,
              y: stripeY,
              width: Math.max((overlap / total) * this.width, 1.5),
              height: 3,
              fill: SLOT_COLORS[slot],
              class: `overlap overlap-${slot}`,
            }),
          );
        }
        stripeY += 4;
      }
      x += w;
    }
    return group;
  }
}

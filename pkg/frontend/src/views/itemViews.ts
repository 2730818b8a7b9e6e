/** Item-level views: scatter with density switching, feature histograms,
 * the tabular list, and the focus-item card with stepping controls. */

import { FeatureBarWire, ScatterWire, Slot } from "../api.js";
import { Store } from "../state.js";
import { FOCUS_COLOR, SLOT_COLORS, el, formatNumber, scale, svg } from "../svg.js";
import { View, runAction } from "./base.js";

const W = 300;
const H = 220;

export class ScatterView extends View {
  xVar = "";
  yVar = "";
  resolution = 16;
  /** above this many items the view switches from points to binned density */
  densityThreshold = 600;

  constructor(store: Store) {
    super(store, "scatter", "scatter");
  }

  private variables(): string[] {
    const scores = this.store.classifiers.map((c) => `score:${c.name}`);
    const features = (this.store.info?.features ?? []).map((f) => `feature:${f}`);
    return [...scores, ...features];
  }

  protected async fetchData(): Promise<ScatterWire | null> {
    const available = this.variables();
    if (!available.length) return null;
    if (!this.xVar) this.xVar = available[0];
    if (!this.yVar) this.yVar = available[available.length > 1 ? 1 : 0];
    try {
      return await this.store.api.curves<ScatterWire>(this.store.session, "scatter", {
        x: this.xVar,
        y: this.yVar,
        resolution: this.resolution,
      });
    } catch {
      return null; // e.g. categorical feature picked; keep the pickers usable
    }
  }

  protected render(data: ScatterWire | null): void {
    const controls = el("div", { class: "scatter-controls" });
    for (const axis of ["x", "y"] as const) {
      const picker = el("select", { class: `picker-${axis}` });
      for (const variable of this.variables()) {
        const option = el("option", { value: variable }, variable);
        if ((axis === "x" ? this.xVar : this.yVar) === variable) {
          option.setAttribute("selected", "selected");
        }
        picker.appendChild(option);
      }
      picker.addEventListener("change", () => {
        if (axis === "x") this.xVar = picker.value;
        else this.yVar = picker.value;
        void this.refresh();
      });
      controls.append(el("span", { class: "muted" }, ` ${axis}: `), picker);
    }
    this.body.appendChild(controls);
    if (!data) return;

    const chart = svg("svg", { width: W, height: H });
    const xEdges = data.x_edges;
    const yEdges = data.y_edges;
    const xFor = scale(xEdges[0], xEdges[xEdges.length - 1] || 1, 26, W - 6);
    const yFor = scale(yEdges[0], yEdges[yEdges.length - 1] || 1, H - 20, 6);
    const maxCount = Math.max(1, ...data.counts.map((row) => Math.max(...row)));

    if (data.total > this.densityThreshold) {
      // density encoding
      data.counts.forEach((row, ix) => {
        row.forEach((count, iy) => {
          if (count <= 0) return;
          chart.appendChild(
            svg("rect", {
              x: xFor(xEdges[ix]),
              y: yFor(yEdges[iy + 1]),
              width: Math.abs(xFor(xEdges[ix + 1]) - xFor(xEdges[ix])),
              height: Math.abs(yFor(yEdges[iy]) - yFor(yEdges[iy + 1])),
              fill: "#35618f",
              "fill-opacity": 0.15 + 0.85 * (count / maxCount),
              class: "density-cell",
              "data-count": count,
            }),
          );
        });
      });
    } else {
      // few items: individual marks at cell centers instead of density
      data.counts.forEach((row, ix) => {
        row.forEach((count, iy) => {
          for (let k = 0; k < count; k++) {
            chart.appendChild(
              svg("circle", {
                cx: xFor((xEdges[ix] + xEdges[ix + 1]) / 2),
                cy: yFor((yEdges[iy] + yEdges[iy + 1]) / 2),
                r: 2,
                fill: "#35618f",
                "fill-opacity": 0.5,
                class: "scatter-point",
              }),
            );
          }
        });
      });
    }
    // slot selections always render as exact points over the field
    for (const slot of ["A", "B"] as const) {
      for (const point of data.points[slot] ?? []) {
        chart.appendChild(
          svg("circle", {
            cx: xFor(point.x),
            cy: yFor(point.y),
            r: 3,
            fill: SLOT_COLORS[slot],
            class: `overlay-point overlay-${slot}`,
            "data-id": point.id,
          }),
        );
      }
    }
    const focusId = this.store.focus.focus;
    if (focusId) {
      const overlayPoint = (["A", "B"] as Slot[])
        .flatMap((slot) => data.points[slot] ?? [])
        .find((p) => p.id === focusId);
      if (overlayPoint) {
        chart.appendChild(
          svg("circle", {
            cx: xFor(overlayPoint.x), cy: yFor(overlayPoint.y), r: 5,
            fill: FOCUS_COLOR, class: "focus-marker",
          }),
        );
      }
    }
    this.body.appendChild(chart as unknown as Node);
  }
}

export class FeatureHistogramView extends View {
  feature = "";
  bins = 10;

  constructor(store: Store) {
    super(store, "feature histogram", "feature-histogram");
  }

  protected async fetchData(): Promise<{
    feature: string;
    bars: FeatureBarWire[];
    overlaps: Partial<Record<Slot, number[]>>;
  } | null> {
    const features = this.store.info?.features ?? [];
    if (!features.length) return null;
    if (!this.feature) this.feature = features[0];
    return this.store.api.curves(this.store.session, "feature-histogram", {
      feature: this.feature,
      bins: this.bins,
    });
  }

  protected render(
    data: { feature: string; bars: FeatureBarWire[]; overlaps: Partial<Record<Slot, number[]>> } | null,
  ): void {
    const features = this.store.info?.features ?? [];
    const picker = el("select", { class: "feature-picker" });
    for (const feature of features) {
      const option = el("option", { value: feature }, feature);
      if (feature === this.feature) option.setAttribute("selected", "selected");
      picker.appendChild(option);
    }
    picker.addEventListener("change", () => {
      this.feature = picker.value;
      void this.refresh();
    });
    this.body.appendChild(picker);
    if (!data) return;

    const chart = svg("svg", { width: W, height: 170 });
    const maxCount = Math.max(1, ...data.bars.map((b) => b.count));
    const slotWidth = (W - 30) / Math.max(data.bars.length, 1);
    data.bars.forEach((bar, index) => {
      const h = (bar.count / maxCount) * 120;
      const x = 24 + index * slotWidth;
      const rect = svg("rect", {
        x,
        y: 130 - h,
        width: slotWidth - 4,
        height: Math.max(h, bar.count > 0 ? 1 : 0),
        fill: "#7a9bbd",
        class: "feature-bar",
        "data-label": bar.label,
        "data-count": bar.count,
      });
      rect.addEventListener("click", () =>
        runAction(
          this.store.selectExpr(
            { pred: bar.predicate },
            "A",
            `${data.feature} ${bar.label}`,
          ),
        ),
      );
      chart.appendChild(rect);
      let stripeY = 134;
      for (const slot of ["A", "B"] as const) {
        const overlap = data.overlaps[slot]?.[index] ?? 0;
        if (overlap > 0) {
          chart.appendChild(
            svg("rect", {
              x,
              y: stripeY,
              width: Math.max((overlap / maxCount) * (slotWidth - 4), 2),
              height: 3,
              fill: SLOT_COLORS[slot],
              class: `overlap overlap-${slot}`,
            }),
          );
        }
        stripeY += 4;
      }
      const text = svg("text", {
        x: x + (slotWidth - 4) / 2,
        y: 152,
        class: "bar-label",
        "text-anchor": "middle",
      });
      text.textContent = bar.label.length > 9 ? bar.label.slice(0, 8) + "…" : bar.label;
      chart.appendChild(text);
    });
    this.body.appendChild(chart as unknown as Node);
  }
}

export class ListView extends View {
  limit = 12;
  offset = 0;
  scopeSelection: string | undefined;

  constructor(store: Store) {
    super(store, "items", "list");
  }

  protected fetchData() {
    return this.store.api.instances(this.store.session, {
      offset: this.offset,
      limit: this.limit,
      ...(this.scopeSelection ? { selection: this.scopeSelection } : {}),
    });
  }

  protected render(data: { rows: import("../api.js").InstanceRow[]; total: number }): void {
    const classifierNames = this.store.classifiers.map((c) => c.name);
    const table = el("table", { class: "item-list" });
    const head = el("tr");
    head.append(el("th", {}, "id"), el("th", {}, "label"));
    for (const name of classifierNames) head.appendChild(el("th", {}, name));
    table.appendChild(head);
    for (const row of data.rows) {
      const tr = el("tr", {
        class: row.id === this.store.focus.focus ? "focused-row" : "",
        "data-id": row.id,
      });
      tr.append(el("td", {}, row.id), el("td", {}, row.label));
      for (const name of classifierNames) {
        const cell = row.classifiers[name];
        tr.appendChild(
          el("td", {}, cell ? `${formatNumber(cell.score)} ${cell.outcome}` : ""),
        );
      }
      tr.addEventListener("click", () => runAction(this.store.setFocus(row.id)));
      table.appendChild(tr);
    }
    this.body.appendChild(table);

    const pager = el("div", { class: "pager" });
    const prev = el("button", {}, "‹ prev");
    prev.addEventListener("click", () => {
      this.offset = Math.max(0, this.offset - this.limit);
      void this.refresh();
    });
    const next = el("button", {}, "next ›");
    next.addEventListener("click", () => {
      if (this.offset + this.limit < data.total) this.offset += this.limit;
      void this.refresh();
    });
    pager.append(
      prev,
      el("span", { class: "muted" }, ` ${this.offset}–${Math.min(this.offset + this.limit, data.total)} of ${data.total} `),
      next,
    );
    this.body.appendChild(pager);
  }
}

export class FocusView extends View {
  scope: "all" | "A" | "B" = "all";

  constructor(store: Store) {
    super(store, "focus item", "focus");
  }

  protected fetchData() {
    return Promise.resolve(this.store.focus);
  }

  protected render(focus: import("../api.js").FocusPayload): void {
    const controls = el("div", { class: "focus-controls" });
    const scopePicker = el("select", { class: "scope-picker" });
    for (const scope of ["all", "A", "B"]) {
      const option = el("option", { value: scope }, scope);
      if (scope === this.scope) option.setAttribute("selected", "selected");
      scopePicker.appendChild(option);
    }
    scopePicker.addEventListener("change", () => {
      this.scope = scopePicker.value as "all" | "A" | "B";
    });
    for (const [label, mode] of [["‹ prev", "prev"], ["next ›", "next"], ["random", "random"]]) {
      const button = el("button", { class: `step-${mode}` }, label);
      button.addEventListener("click", () =>
        runAction(this.store.stepFocus(mode, this.scope, mode === "random" ? 1 : undefined)),
      );
      controls.appendChild(button);
    }
    controls.appendChild(scopePicker);
    this.body.appendChild(controls);

    if (!focus.detail) {
      this.body.appendChild(el("p", { class: "muted" }, "no focus item"));
      return;
    }
    const detail = focus.detail;
    const card = el("div", { class: "focus-card" });
    card.appendChild(el("h3", {}, `${detail.id} — ${detail.label}`));
    const dl = el("dl");
    for (const [name, value] of Object.entries(detail.features)) {
      dl.append(el("dt", {}, name), el("dd", {}, String(value)));
    }
    for (const [name, cell] of Object.entries(detail.classifiers)) {
      dl.append(
        el("dt", {}, name),
        el("dd", {}, `${formatNumber(cell.score)} → ${cell.outcome}`),
      );
    }
    card.appendChild(dl);
    this.body.appendChild(card);
  }
}

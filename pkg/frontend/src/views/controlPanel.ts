/** Threshold sliders per classifier plus "set as new classifier" and
 * sampling controls. Dragging a slider issues an operating-point update;
 * every open view refreshes from the service afterwards. */

import { ClassifierRow } from "../api.js";
import { Store } from "../state.js";
import { el, formatNumber } from "../svg.js";
import { View, runAction } from "./base.js";

export class ControlPanelView extends View {
  constructor(store: Store) {
    super(store, "operating points", "control-panel");
  }

  protected fetchData(): Promise<ClassifierRow[]> {
    return Promise.resolve(this.store.classifiers);
  }

  protected render(rows: ClassifierRow[]): void {
    for (const row of rows) this.body.appendChild(this.classifierControls(row));
    this.body.appendChild(this.samplingControls());
  }

  private classifierControls(row: ClassifierRow): HTMLElement {
    const container = el("div", { class: "classifier-controls", "data-classifier": row.name });
    const title = el("div", { class: "control-title" });
    title.append(
      el("strong", {}, row.name),
      el("span", { class: "muted" }, row.kind === "derived" ? " (frozen)" : ""),
    );
    container.appendChild(title);

    const { lower, upper } = row.operating_point;
    const state = { lower, upper };
    const readout = el(
      "span",
      { class: "readout" },
      `[${formatNumber(lower)}, ${formatNumber(upper)}]`,
    );

    const slider = (kind: "lower" | "upper") => {
      const input = el("input", {
        type: "range",
        min: "0",
        max: "1",
        step: "0.01",
        value: String(state[kind]),
        class: `slider slider-${kind}`,
        "data-classifier": row.name,
      });
      if (row.kind === "derived") input.setAttribute("disabled", "disabled");
      input.addEventListener("input", () => {
        const v = Number(input.value);
        if (kind === "lower") state.lower = Math.min(v, state.upper);
        else state.upper = Math.max(v, state.lower);
        readout.textContent = `[${formatNumber(state.lower)}, ${formatNumber(state.upper)}]`;
        runAction(this.store.setOperatingPoint(row.name, state.lower, state.upper));
      });
      const label = el("label", {}, kind);
      label.appendChild(input);
      return label;
    };

    container.append(slider("lower"), slider("upper"), readout);

    if (row.kind !== "derived") {
      const freeze = el("button", { class: "freeze-button" }, "set as new classifier");
      freeze.addEventListener("click", () => {
        const name = `${row.name}@${formatNumber(state.lower)}-${formatNumber(state.upper)}`;
        runAction(this.store.deriveClassifier(row.name, name, state.lower, state.upper));
      });
      container.appendChild(freeze);
    }
    return container;
  }

  private samplingControls(): HTMLElement {
    const container = el("div", { class: "sampling-controls" });
    const seed = el("input", { type: "number", value: "1", class: "seed-input" });
    const partition = el("button", {}, "partition 70/30");
    partition.addEventListener("click", () =>
      runAction(
        this.store.addSample({
          kind: "partition",
          p: 0.7,
          stratify_by: "class",
          seed: Number(seed.value),
        }),
      ),
    );
    const boot = el("button", {}, "bootstrap");
    boot.addEventListener("click", () =>
      runAction(this.store.addSample({ kind: "bootstrap", seed: Number(seed.value) })),
    );
    container.append(el("span", { class: "muted" }, "sampling seed "), seed, partition, boot);
    return container;
  }
}

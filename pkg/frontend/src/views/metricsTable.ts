/** Summary metrics table straight from the service: one row per
 * classifier, one column per metric, values shown verbatim. */

import { ClassifierRow } from "../api.js";
import { Store } from "../state.js";
import { el, formatNumber } from "../svg.js";
import { View } from "./base.js";

const COLUMNS = ["accuracy", "precision", "recall", "f1", "mcc", "auc", "brier"];

export class MetricsTableView extends View {
  constructor(store: Store) {
    super(store, "metrics", "metrics-table");
  }

  protected fetchData(): Promise<ClassifierRow[]> {
    return Promise.resolve(this.store.classifiers);
  }

  protected render(rows: ClassifierRow[]): void {
    const table = el("table", { class: "metrics" });
    const head = el("tr");
    head.appendChild(el("th", {}, "classifier"));
    head.appendChild(el("th", {}, "operating point"));
    for (const column of COLUMNS) head.appendChild(el("th", {}, column));
    table.appendChild(head);
    for (const row of rows) {
      const tr = el("tr", { "data-classifier": row.name });
      tr.appendChild(el("td", {}, row.name + (row.kind === "derived" ? " *" : "")));
      tr.appendChild(
        el(
          "td",
          {},
          `[${formatNumber(row.operating_point.lower)}, ${formatNumber(row.operating_point.upper)}]`,
        ),
      );
      for (const column of COLUMNS) {
        const metric = row.metrics[column];
        tr.appendChild(
          el(
            "td",
            { class: metric.defined ? "" : "undefined-metric", "data-metric": column },
            metric.defined ? formatNumber(metric.value) : "–",
          ),
        );
      }
      table.appendChild(tr);
    }
    this.body.appendChild(table);
  }
}

/** Shared view plumbing: subscribe to the store, re-pull own data on each
 * refresh cycle, drop stale responses (cancel-and-replace). */

import { Store } from "../state.js";
import { clear, el } from "../svg.js";

export abstract class View {
  root: HTMLElement;
  body: HTMLElement;
  protected generation = 0;
  private unsubscribe: (() => void) | null = null;

  constructor(
    public store: Store,
    title: string,
    className: string,
  ) {
    this.root = el("section", { class: `view ${className}` });
    const header = el("header", {}, title);
    this.body = el("div", { class: "view-body" });
    this.root.append(header, this.body);
  }

  mount(container: Element): this {
    container.appendChild(this.root);
    this.unsubscribe = this.store.subscribe(() => void this.refresh());
    void this.refresh();
    return this;
  }

  unmount(): void {
    this.unsubscribe?.();
    this.root.remove();
  }

  /** Pull data and render; stale responses are discarded. */
  async refresh(): Promise<void> {
    const generation = ++this.generation;
    let data: unknown;
    try {
      data = await this.fetchData();
    } catch (error) {
      if (generation === this.generation) this.renderError(error);
      return;
    }
    if (generation !== this.generation) return; // replaced by a newer pull
    clear(this.body);
    this.render(data);
  }

  protected renderError(error: unknown): void {
    clear(this.body);
    const message = error instanceof Error ? error.message : String(error);
    this.body.appendChild(el("p", { class: "view-error" }, message));
  }

  protected abstract fetchData(): Promise<unknown>;
  protected abstract render(data: unknown): void;
}

/** Non-blocking error toast, used for failed user actions. */
export function toast(message: string): void {
  const node = el("div", { class: "toast" }, message);
  document.body.appendChild(node);
  setTimeout(() => node.remove(), 4000);
}

export function runAction(promise: Promise<unknown>): void {
  promise.catch((error) => {
    const message = error instanceof Error ? error.message : String(error);
    toast(message);
  });
}

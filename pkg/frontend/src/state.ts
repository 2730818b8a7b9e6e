/**
 * Session store: the single place that mutates server state and the hub
 * views subscribe to. After every successful mutation the shared state
 * (classifiers, selections, focus) is re-pulled and subscribers re-render
 * — the polling-after-mutation refresh cycle.
 */

import {
  Api,
  ClassifierRow,
  ExprNode,
  FocusPayload,
  SelectionInfo,
  SessionInfo,
  Slot,
} from "./api.js";

export type Listener = () => void;

export class Store {
  session = "";
  info: SessionInfo | null = null;
  classifiers: ClassifierRow[] = [];
  selections: SelectionInfo[] = [];
  focus: FocusPayload = { focus: null, detail: null };
  /** bumped on every refresh; views use it to drop stale responses */
  version = 0;

  private listeners: Listener[] = [];
  private mutating: Promise<unknown> = Promise.resolve();

  constructor(public api: Api) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify() {
    this.version += 1;
    for (const listener of [...this.listeners]) listener();
  }

  slotSelection(slot: Slot): SelectionInfo | undefined {
    return this.selections.find((s) => s.slot === slot);
  }

  async connect(session: string): Promise<void> {
    this.session = session;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    const sid = this.session;
    const [info, classifiers, selections] = await Promise.all([
      this.api.sessionInfo(sid),
      this.api.classifiers(sid),
      this.api.selections(sid),
    ]);
    this.info = info;
    this.classifiers = classifiers.classifiers;
    this.selections = selections.selections;
    if (info.focus) {
      const detail = await this.api.instanceDetail(sid, info.focus);
      this.focus = { focus: info.focus, detail };
    } else {
      this.focus = { focus: null, detail: null };
    }
    this.notify();
  }

  /** Serialize mutations: at most one in flight, later calls queue up. */
  private enqueue<T>(action: () => Promise<T>): Promise<T> {
    const next = this.mutating.then(action, action);
    this.mutating = next.catch(() => undefined);
    return next;
  }

  setOperatingPoint(name: string, lower: number, upper: number): Promise<void> {
    return this.enqueue(async () => {
      await this.api.putOperatingPoint(this.session, name, lower, upper);
      await this.refresh();
    });
  }

  /** Click-to-select: materialize a predicate expression into a slot. */
  selectExpr(expr: ExprNode, slot: Slot = "A", name?: string): Promise<SelectionInfo> {
    return this.enqueue(async () => {
      const selection = await this.api.postSelection(this.session, expr, { slot, name });
      await this.refresh();
      return selection;
    });
  }

  deriveClassifier(base: string, name: string, lower: number, upper: number): Promise<void> {
    return this.enqueue(async () => {
      await this.api.derive(this.session, base, name, lower, upper);
      await this.refresh();
    });
  }

  setFocus(id: string | null): Promise<void> {
    return this.enqueue(async () => {
      this.focus = await this.api.putFocus(this.session, id);
      this.notify();
    });
  }

  stepFocus(mode: string, scope: string, seed?: number): Promise<void> {
    return this.enqueue(async () => {
      this.focus = await this.api.stepFocus(this.session, mode, scope, seed);
      this.notify();
    });
  }

  addSample(spec: Record<string, unknown>): Promise<void> {
    return this.enqueue(async () => {
      await this.api.postSample(this.session, spec);
      await this.refresh();
    });
  }

  focusScore(classifier: string): number | null {
    const detail = this.focus.detail;
    if (!detail) return null;
    const entry = detail.classifiers[classifier];
    return entry ? entry.score : null;
  }
}

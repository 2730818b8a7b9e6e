/**
 * Typed client for the assessment service. Every number rendered by the
 * views comes out of these response bodies verbatim; the client never
 * recomputes metrics.
 */

export type Category = "TP" | "FP" | "TN" | "FN" | "Rejected";
export const CATEGORIES: Category[] = ["TP", "FP", "TN", "FN", "Rejected"];

export type Slot = "A" | "B";

export interface OperatingPointWire {
  lower: number;
  upper: number;
}

export interface MetricWire {
  value: number;
  defined: boolean;
}

export interface ClassifierRow {
  name: string;
  kind: "loaded" | "derived";
  base: string | null;
  operating_point: OperatingPointWire;
  version: number;
  confusion: Record<string, number>;
  metrics: Record<string, MetricWire>;
}

export interface CurvePointWire {
  x: number;
  y: number;
  param: number | null;
  undefined: boolean;
}

export interface CurveSeriesWire {
  label: string;
  kind: string;
  points: CurvePointWire[];
}

export interface TrinaryCountsWire {
  tp: number;
  fp: number;
  tn: number;
  fn: number;
  rejected: number;
  total: number;
}

export interface TrinaryEntry {
  label: string;
  operating_point: OperatingPointWire;
  counts: TrinaryCountsWire;
  overlaps: Partial<Record<Slot, Record<Category, number>>>;
}

export interface PerfConfBinWire {
  bin: number;
  lo: number;
  hi: number;
  counts: Record<Category, number>;
  total: number;
}

export interface PerfConfEntry {
  label: string;
  bins: PerfConfBinWire[];
  overlaps: Partial<Record<Slot, number[][]>>;
}

export interface ReliabilityBinWire {
  x: number;
  y: number;
  param: number;
  undefined: boolean;
  lo: number;
  hi: number;
  count: number;
}

export interface BandValueWire {
  value: number;
  undefined: boolean;
}

export interface BandwidthSeriesWire {
  label: string;
  thresholds: number[];
  center: BandValueWire[];
  bands: { bandwidth: number; upper: BandValueWire[]; lower: BandValueWire[] }[];
}

export interface HeatmapCellWire {
  lower: number;
  upper: number;
  value: number;
  coverage: number;
  undefined: boolean;
}

export interface ScatterWire {
  x_var: string;
  y_var: string;
  x_edges: number[];
  y_edges: number[];
  counts: number[][];
  total: number;
  points: Partial<Record<Slot, { id: string; x: number; y: number }[]>>;
}

export interface FeatureBarWire {
  index: number;
  label: string;
  count: number;
  predicate: Record<string, unknown>;
  lo?: number;
  hi?: number;
}

export interface SelectionInfo {
  id: string;
  name: string;
  weight: number;
  slot: Slot | null;
  size: number;
  expr: ExprNode;
}

export interface InstanceRow {
  id: string;
  label: string;
  features: Record<string, number | string>;
  classifiers: Record<string, { score: number; outcome: Category }>;
}

export interface FocusPayload {
  focus: string | null;
  detail: InstanceRow | null;
}

export interface SessionInfo {
  session: string;
  classes: [string, string];
  counts: Record<string, unknown>;
  features: string[];
  focus: string | null;
}

export type ExprNode =
  | { pred: Record<string, unknown> }
  | { op: "union" | "intersection" | "difference" | "complement"; args: ExprNode[] };

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class Api {
  constructor(
    private base: string = "",
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 204) return undefined as T;
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload.code ?? "ERROR", payload.message ?? "request failed");
    }
    return payload as T;
  }

  createSession(payload: unknown): Promise<{ session: string; report: unknown }> {
    return this.request("POST", "/sessions", payload);
  }

  sessionInfo(sid: string): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${sid}`);
  }

  classifiers(sid: string): Promise<{ classifiers: ClassifierRow[] }> {
    return this.request("GET", `/sessions/${sid}/classifiers`);
  }

  putOperatingPoint(sid: string, name: string, lower: number, upper: number) {
    return this.request<{ version: number }>(
      "PUT",
      `/sessions/${sid}/operating-points/${encodeURIComponent(name)}`,
      { lower, upper },
    );
  }

  derive(sid: string, base: string, name: string, lower: number, upper: number) {
    return this.request("POST", `/sessions/${sid}/classifiers/derived`, {
      base,
      name,
      lower,
      upper,
    });
  }

  selections(sid: string): Promise<{ selections: SelectionInfo[] }> {
    return this.request("GET", `/sessions/${sid}/selections`);
  }

  postSelection(
    sid: string,
    expr: ExprNode,
    options: { name?: string; slot?: Slot; weight?: number } = {},
  ): Promise<SelectionInfo> {
    return this.request("POST", `/sessions/${sid}/selections`, { expr, ...options });
  }

  members(sid: string, selectionId: string): Promise<{ members: string[] }> {
    return this.request("GET", `/sessions/${sid}/selections/${selectionId}/members`);
  }

  curves<T>(sid: string, kind: string, params: Record<string, string | number> = {}): Promise<T> {
    const query = new URLSearchParams(
      Object.entries(params).map(([k, v]) => [k, String(v)]),
    ).toString();
    return this.request("GET", `/sessions/${sid}/curves/${kind}${query ? "?" + query : ""}`);
  }

  instances(
    sid: string,
    params: { offset?: number; limit?: number; selection?: string } = {},
  ): Promise<{ rows: InstanceRow[]; total: number; offset: number }> {
    const query = new URLSearchParams(
      Object.entries(params).map(([k, v]) => [k, String(v)]),
    ).toString();
    return this.request("GET", `/sessions/${sid}/instances${query ? "?" + query : ""}`);
  }

  instanceDetail(sid: string, id: string): Promise<InstanceRow> {
    return this.request("GET", `/sessions/${sid}/instances/${encodeURIComponent(id)}`);
  }

  putFocus(sid: string, id: string | null): Promise<FocusPayload> {
    return this.request("PUT", `/sessions/${sid}/focus`, { id });
  }

  stepFocus(sid: string, mode: string, scope: string, seed?: number): Promise<FocusPayload> {
    return this.request("POST", `/sessions/${sid}/focus/step`, { mode, scope, seed });
  }

  postSample(sid: string, spec: Record<string, unknown>) {
    return this.request("POST", `/sessions/${sid}/samples`, spec);
  }
}

/** Predicate expression helpers used by the clickable views. */
export const exprs = {
  outcome(classifier: string, category: Category): ExprNode {
    return { pred: { kind: "outcome", classifier, category } };
  },
  scoreBin(classifier: string, lo: number, hi: number, bin: number): ExprNode {
    return { pred: { kind: "score-range", classifier, lo, hi, bin } };
  },
  binSegment(classifier: string, lo: number, hi: number, bin: number, category: Category): ExprNode {
    return {
      op: "intersection",
      args: [exprs.scoreBin(classifier, lo, hi, bin), exprs.outcome(classifier, category)],
    };
  },
  classLabel(label: string): ExprNode {
    return { pred: { kind: "class", label } };
  },
};

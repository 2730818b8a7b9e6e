/** Tiny DOM/SVG helpers and shared visual encodings. */

export const SVG_NS = "http://www.w3.org/2000/svg";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function svg(
  tag: string,
  attrs: Record<string, string | number> = {},
): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Linear scale mapping [d0, d1] to [r0, r1]. */
export function scale(d0: number, d1: number, r0: number, r1: number) {
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

/** Outcome colors: a 2-color correct/incorrect scheme plus neutral rejected. */
export const CATEGORY_COLORS: Record<string, string> = {
  TP: "#2a7fbf",
  TN: "#7fb2d9",
  FP: "#d9730d",
  FN: "#a63603",
  Rejected: "#9b9b9b",
};

export const SLOT_COLORS: Record<string, string> = { A: "#d63fa6", B: "#00b5ad" };
export const FOCUS_COLOR = "#f2c200";

/** A bar may be too small to see or click; give it a circular glyph. */
export const SMALL_BAR_PX = 3;

export function formatNumber(v: number): string {
  if (Number.isInteger(v)) return String(v);
  return v.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
}

/** Display formatting and judgment-control encoding.
 *
 * Only presentation lives here. Every number that ends up on screen was
 * computed by the service; these helpers round it for display or translate
 * between the pair-control state and the wire value.
 */

export function fmtWeight(w: number): string {
  return w.toFixed(3);
}

export function fmtCr(cr: number): string {
  return cr.toFixed(4);
}

export function fmtTotal(t: number): string {
  return t.toFixed(3);
}

export function fmtShare(w: number): string {
  return (100 * w).toFixed(1) + "%";
}

const INTENSITY_LABELS: Record<number, string> = {
  1: "Equally preferred",
  3: "Moderately preferred",
  5: "Strongly preferred",
  7: "Very strongly preferred",
  9: "Extremely preferred",
};

export function intensityLabel(value: number): string {
  const exact = INTENSITY_LABELS[value];
  if (exact) return exact;
  return "Between the two neighboring levels";
}

const RATING_LABELS = [
  "Worst",
  "Very poor",
  "Poor",
  "Well below average",
  "Below average",
  "Average",
  "Above average",
  "Well above average",
  "Good",
  "Very good",
  "Best",
];

export function ratingLabel(value: number): string {
  return RATING_LABELS[value] ?? String(value);
}

export type Direction = "row" | "col";

export interface PairValue {
  direction: Direction;
  intensity: number;
}

/** Control state -> wire value. Intensity 1 is "equal" whatever the toggle
 * says; reciprocals go out as fraction strings so nothing is rounded. */
export function encodeJudgment(value: PairValue): number | string {
  if (value.intensity === 1) return 1;
  if (value.direction === "row") return value.intensity;
  return `1/${value.intensity}`;
}

/** Wire value -> control state, for re-opening an already judged node.
 * Returns null for values that did not come from the 9-point control. */
export function decodeJudgment(raw: number | string): PairValue | null {
  if (typeof raw === "string") {
    const m = /^([0-9]+)\s*\/\s*([0-9]+)$/.exec(raw.trim());
    if (!m) return null;
    const num = Number(m[1]);
    const den = Number(m[2]);
    if (num === 1 && den >= 1 && den <= 9) {
      return den === 1 ? { direction: "row", intensity: 1 } : { direction: "col", intensity: den };
    }
    if (den === 1 && num >= 1 && num <= 9) return { direction: "row", intensity: num };
    return null;
  }
  if (!isFinite(raw) || raw <= 0) return null;
  if (raw >= 1) {
    const k = Math.round(raw);
    return Math.abs(raw - k) < 1e-9 && k <= 9 ? { direction: "row", intensity: k } : null;
  }
  const k = Math.round(1 / raw);
  return Math.abs(1 / raw - k) < 1e-6 && k <= 9 ? { direction: "col", intensity: k } : null;
}

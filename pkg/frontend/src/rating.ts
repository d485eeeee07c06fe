/**
 * Local rating math.
 *
 * Everything in this module runs on the device from server-provided,
 * user-independent numbers (sustainability indices, tag details) plus the
 * locally stored preference scores.  It mirrors the engine's formulas
 * exactly; the shared fixture suite in ../fixtures pins both sides to the
 * same results within 1e-9.
 */

import type { PreferenceTagRow, TagDetail } from "./types.js";

export const SCORE_MEDIAN = 5;
export const SCORE_MAX = 10;
export const ALPHA = 5;
export const BETA = 5;

export interface StrictInfo {
  id: string;
  strict: boolean;
}

export interface RatingResult {
  raw: number;
  scaled: number;
  strictViolation: string | null;
}

const clamp = (value: number, lo: number, hi: number) =>
  Math.min(hi, Math.max(lo, value));

/** Offset of one slider value from the neutral midpoint. */
export function offsetOf(score: number | undefined): number {
  return (score ?? SCORE_MEDIAN) - SCORE_MEDIAN;
}

/** Sum of absolute offsets; 0 means an entirely neutral user. */
export function offsetDenominator(
  scores: Record<string, number>,
  preferenceIds: string[],
): number {
  let total = 0;
  for (const id of preferenceIds) total += Math.abs(offsetOf(scores[id]));
  return total;
}

/**
 * Offset-weighted rating of one product from its index vector.
 *
 * A strict preference whose slider sits at the exact maximum floors the
 * rating to the scale minimum when the product opposes it; the first
 * violating preference (by id) is reported as the cause.
 */
export function rateProduct(
  indices: Record<string, number>,
  scores: Record<string, number>,
  preferences: StrictInfo[],
  strictEnabled?: (preferenceId: string) => boolean,
): RatingResult {
  const ordered = [...preferences].sort((a, b) => (a.id < b.id ? -1 : 1));
  for (const preference of ordered) {
    if (!preference.strict) continue;
    if (strictEnabled && !strictEnabled(preference.id)) continue;
    const score = scores[preference.id] ?? SCORE_MEDIAN;
    if (score === SCORE_MAX && (indices[preference.id] ?? 0) < 0) {
      return {
        raw: -1,
        scaled: BETA - ALPHA,
        strictViolation: preference.id,
      };
    }
  }
  const ids = ordered.map((p) => p.id);
  const denominator = offsetDenominator(scores, ids);
  if (denominator === 0) {
    return { raw: 0, scaled: BETA, strictViolation: null };
  }
  let total = 0;
  for (const id of ids) {
    const delta = offsetOf(scores[id]);
    if (delta === 0) continue;
    total += (indices[id] ?? 0) * delta;
  }
  const raw = clamp(total / denominator, -1, 1);
  return { raw, scaled: ALPHA * raw + BETA, strictViolation: null };
}

export interface RankedEntry<T> {
  item: T;
  rating: RatingResult;
}

/** Descending by rating, ties broken by ascending product id. */
export function rankProducts<T>(
  items: T[],
  idOf: (item: T) => string,
  indicesOf: (item: T) => Record<string, number>,
  scores: Record<string, number>,
  preferences: StrictInfo[],
  strictEnabled?: (preferenceId: string) => boolean,
): RankedEntry<T>[] {
  const ranked = items.map((item) => ({
    item,
    rating: rateProduct(indicesOf(item), scores, preferences, strictEnabled),
  }));
  ranked.sort((a, b) => {
    if (a.rating.raw !== b.rating.raw) return b.rating.raw - a.rating.raw;
    return idOf(a.item) < idOf(b.item) ? -1 : 1;
  });
  return ranked;
}

/**
 * Exact per-preference contributions: baseline BETA plus these sums to
 * the displayed rating.  Empty for an all-neutral user.
 */
export function explainByPreference(
  indices: Record<string, number>,
  scores: Record<string, number>,
  preferences: StrictInfo[],
): Record<string, number> {
  const ids = preferences.map((p) => p.id).sort();
  const denominator = offsetDenominator(scores, ids);
  if (denominator === 0) return {};
  const out: Record<string, number> = {};
  for (const id of ids) {
    const delta = offsetOf(scores[id]);
    out[id] = delta === 0 ? 0 : (ALPHA * (indices[id] ?? 0) * delta) / denominator;
  }
  return out;
}

/**
 * Exact per-product-tag contributions from the served tag detail.
 *
 * Each aspect's normalized value is split across the product's tags in
 * proportion to their association scores (zero aggregate means zero
 * slices), which keeps the split exact under clipping and saturation.
 */
export function explainByProductTag(
  detail: TagDetail,
  scores: Record<string, number>,
  preferences: StrictInfo[],
): Record<string, number> {
  const ids = preferences.map((p) => p.id).sort();
  const denominator = offsetDenominator(scores, ids);
  if (denominator === 0) return {};

  const byAspect = new Map<string, PreferenceTagRow>();
  const memberships = new Map<string, string[]>();
  for (const row of detail.preference_tags) {
    byAspect.set(row.id, row);
    for (const preferenceId of row.preference_ids) {
      const list = memberships.get(preferenceId) ?? [];
      list.push(row.id);
      memberships.set(preferenceId, list);
    }
  }

  const tagIds = detail.tags.map((t) => t.id).sort();
  const out: Record<string, number> = {};
  for (const tid of tagIds) out[tid] = 0;

  for (const preferenceId of ids) {
    const delta = offsetOf(scores[preferenceId]);
    if (delta === 0) continue;
    const aspectIds = (memberships.get(preferenceId) ?? []).slice().sort();
    if (aspectIds.length === 0) continue;
    const weight = delta / (aspectIds.length * denominator);
    for (const aspectId of aspectIds) {
      const row = byAspect.get(aspectId);
      if (!row || row.aggregate === 0) continue;
      const scale = row.normalized / row.aggregate;
      for (const tag of detail.tags) {
        const share = (tag.associations[aspectId] ?? 0) * scale;
        out[tag.id] += ALPHA * share * weight;
      }
    }
  }
  return out;
}

export interface SignedContribution {
  id: string;
  value: number;
}

/** Partition a contribution map into descending positive / ascending negative lists. */
export function splitSigned(contributions: Record<string, number>): {
  positive: SignedContribution[];
  negative: SignedContribution[];
} {
  const entries = Object.entries(contributions).map(([id, value]) => ({ id, value }));
  const positive = entries.filter((e) => e.value > 0).sort((a, b) => b.value - a.value);
  const negative = entries.filter((e) => e.value < 0).sort((a, b) => a.value - b.value);
  return { positive, negative };
}

/**
 * Local-only preference state.
 *
 * Slider values and strict-enforcement toggles live in browser storage
 * and nowhere else; nothing in this module ever touches the network.
 */

import { SCORE_MAX, SCORE_MEDIAN } from "./rating.js";

const STORAGE_KEY = "susrate:preferences:v1";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface PreferenceStateData {
  scores: Record<string, number>;
  strictEnabled: Record<string, boolean>;
}

/** Named score templates, e.g. published by an NGO; applied locally only. */
export const PRESETS: Record<string, Record<string, number>> = {
  "eco-advocate": { "E.1": 9, "E.2": 10, "E.3": 8.5, "S.6": 9, "Q.3": 7 },
  "health-first": { "H.5": 8, "H.6": 8, "H.7": 9, "H.9": 8, "H.10": 8 },
  "animal-friendly": { "S.3": 10, "H.12": 8, "H.13": 9 },
};

export function clampScore(value: number): number {
  if (Number.isNaN(value)) return SCORE_MEDIAN;
  return Math.min(SCORE_MAX, Math.max(0, value));
}

/** Extreme values get an explanatory notice in the UI. */
export function isExtreme(value: number): boolean {
  return value === 0 || value === SCORE_MAX;
}

export class PreferenceState {
  private data: PreferenceStateData = { scores: {}, strictEnabled: {} };

  constructor(private readonly storage: KeyValueStore | null) {
    this.restore();
  }

  get scores(): Record<string, number> {
    return { ...this.data.scores };
  }

  scoreOf(preferenceId: string): number {
    return this.data.scores[preferenceId] ?? SCORE_MEDIAN;
  }

  setScore(preferenceId: string, value: number): number {
    const clamped = clampScore(value);
    if (clamped === SCORE_MEDIAN) {
      delete this.data.scores[preferenceId];
    } else {
      this.data.scores[preferenceId] = clamped;
    }
    this.persist();
    return clamped;
  }

  strictEnabled(preferenceId: string): boolean {
    return this.data.strictEnabled[preferenceId] ?? true;
  }

  setStrictEnabled(preferenceId: string, enabled: boolean): void {
    this.data.strictEnabled[preferenceId] = enabled;
    this.persist();
  }

  resetToNeutral(): void {
    this.data = { scores: {}, strictEnabled: {} };
    this.persist();
  }

  applyPreset(name: string): void {
    const preset = PRESETS[name];
    if (!preset) return;
    this.data.scores = { ...preset };
    this.persist();
  }

  private persist(): void {
    if (!this.storage) return;
    try {
      this.storage.setItem(STORAGE_KEY, JSON.stringify(this.data));
    } catch {
      // storage may be unavailable or full; sliders still work in-memory
    }
  }

  private restore(): void {
    if (!this.storage) return;
    try {
      const raw = this.storage.getItem(STORAGE_KEY);
      if (!raw) return;
      const parsed = JSON.parse(raw) as Partial<PreferenceStateData>;
      const scores: Record<string, number> = {};
      for (const [id, value] of Object.entries(parsed.scores ?? {})) {
        if (typeof value === "number") scores[id] = clampScore(value);
      }
      this.data = {
        scores,
        strictEnabled: { ...(parsed.strictEnabled ?? {}) },
      };
    } catch {
      this.data = { scores: {}, strictEnabled: {} };
    }
  }
}

/** Local preference state and ranking behavior under slider changes. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AssistantController } from "../src/controller.js";
import { clampScore, isExtreme, PreferenceState, PRESETS } from "../src/state.js";
import { FakeServer, MemoryStorage } from "./helpers.js";

const BASE = "http://service.test";

async function freshController(server = new FakeServer()) {
  const controller = new AssistantController(
    new ApiClient(BASE, server.fetch),
    new PreferenceState(new MemoryStorage()),
  );
  await controller.init();
  return controller;
}

describe("preference state", () => {
  it("clamps out-of-range slider input", () => {
    expect(clampScore(12)).toBe(10);
    expect(clampScore(-3)).toBe(0);
    expect(clampScore(7.5)).toBe(7.5);
    expect(clampScore(Number.NaN)).toBe(5);
  });

  it("flags exact endpoints as extreme", () => {
    expect(isExtreme(0)).toBe(true);
    expect(isExtreme(10)).toBe(true);
    expect(isExtreme(9.5)).toBe(false);
    expect(isExtreme(5)).toBe(false);
  });

  it("persists across instances via storage", () => {
    const storage = new MemoryStorage();
    const first = new PreferenceState(storage);
    first.setScore("E.1", 8);
    first.setStrictEnabled("H.12", false);
    const second = new PreferenceState(storage);
    expect(second.scoreOf("E.1")).toBe(8);
    expect(second.strictEnabled("H.12")).toBe(false);
    expect(second.scoreOf("H.7")).toBe(5);
  });

  it("reset returns every slider to neutral", () => {
    const state = new PreferenceState(new MemoryStorage());
    state.setScore("E.1", 9);
    state.setScore("H.7", 1);
    state.resetToNeutral();
    expect(state.scores).toEqual({});
  });

  it("presets apply locally", () => {
    const state = new PreferenceState(new MemoryStorage());
    state.applyPreset("eco-advocate");
    expect(state.scoreOf("E.2")).toBe(PRESETS["eco-advocate"]["E.2"]);
  });

  it("survives corrupted storage", () => {
    const storage = new MemoryStorage();
    storage.setItem("susrate:preferences:v1", "{broken json");
    const state = new PreferenceState(storage);
    expect(state.scores).toEqual({});
  });
});

describe("ranking under slider changes", () => {
  it("all-neutral shows every product at 5.0", async () => {
    const controller = await freshController();
    const ranked = await controller.browseCategory("produce");
    for (const entry of ranked) {
      expect(entry.rating.scaled).toBe(5);
    }
  });

  it("raising a supported preference never lowers the top-index product", async () => {
    const server = new FakeServer();
    const controller = await freshController(server);
    const categories = [
      ...new Set(Object.values(server.fixtures.products).map((p) => p.category_id)),
    ].sort();
    for (const category of categories) {
      const ranked = await controller.browseCategory(category);
      if (ranked.length < 2) continue;
      for (const preference of server.fixtures.preferences.slice(0, 12)) {
        controller.state.resetToNeutral();
        const byIndex = [...ranked].sort(
          (a, b) =>
            (b.item.indices[preference.id] ?? 0) -
            (a.item.indices[preference.id] ?? 0),
        );
        const champion = byIndex[0].item.summary.id;
        let previousRank = controller
          .ranking()
          .findIndex((e) => e.item.summary.id === champion);
        for (const value of [6, 7.5, 9, 10]) {
          const reranked = controller.setPreference(preference.id, value);
          const rank = reranked.findIndex(
            (e) => e.item.summary.id === champion,
          );
          expect(
            rank,
            `${category}/${preference.id}@${value}: ${champion}`,
          ).toBeLessThanOrEqual(previousRank);
          previousRank = rank;
        }
      }
    }
    controller.state.resetToNeutral();
  });

  it("strict preference at 10 floors opposing products unless toggled off", async () => {
    const controller = await freshController();
    const ranked = await controller.browseCategory("dairy");
    controller.setPreference("H.12", 10);
    const floored = controller
      .ranking()
      .filter((e) => e.rating.strictViolation === "H.12");
    expect(floored.length).toBeGreaterThan(0);
    for (const entry of floored) {
      expect(entry.rating.scaled).toBe(0);
    }
    const relaxed = controller.setStrictEnabled("H.12", false);
    for (const entry of relaxed) {
      expect(entry.rating.strictViolation).toBeNull();
    }
    expect(ranked.length).toBe(relaxed.length);
  });
});

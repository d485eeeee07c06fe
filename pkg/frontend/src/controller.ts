/**
 * DOM-free session logic: fetch orchestration, caching, local re-ranking.
 *
 * Slider changes re-rank purely from cached indices (no network on that
 * path); category browsing fetches catalog pages and indices; the
 * explanation drill-down fetches the user-independent tag detail and
 * combines it with local scores on the device.
 */

import { ApiClient } from "./api.js";
import {
  RankedEntry,
  RatingResult,
  explainByPreference,
  explainByProductTag,
  rankProducts,
  splitSigned,
  SignedContribution,
} from "./rating.js";
import { PreferenceState } from "./state.js";
import type { PreferenceMeta, RatableProduct, TagDetail } from "./types.js";

export interface ExplanationView {
  productId: string;
  rating: RatingResult;
  neutral: boolean;
  preferenceContributions: Record<string, number>;
  positiveTags: SignedContribution[];
  negativeTags: SignedContribution[];
  /** True when the tag detail could not be fetched (preference level only). */
  degraded: boolean;
}

export class AssistantController {
  preferences: PreferenceMeta[] = [];
  ontologyVersion: string | null = null;
  offline = false;

  private products = new Map<string, RatableProduct>();
  private tagDetails = new Map<string, TagDetail>();
  private currentCategory: string | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly state: PreferenceState,
  ) {}

  async init(): Promise<void> {
    this.preferences = await this.track(this.api.preferences());
    const health = await this.track(this.api.health());
    this.ontologyVersion = health.ontology_version;
  }

  /** Slider move: clamp, persist locally, and re-rank from cache only. */
  setPreference(preferenceId: string, value: number): RankedEntry<RatableProduct>[] {
    this.state.setScore(preferenceId, value);
    return this.ranking();
  }

  setStrictEnabled(preferenceId: string, enabled: boolean): RankedEntry<RatableProduct>[] {
    this.state.setStrictEnabled(preferenceId, enabled);
    return this.ranking();
  }

  /** Rank the currently loaded products with the current local scores. */
  ranking(): RankedEntry<RatableProduct>[] {
    const items = [...this.products.values()].filter(
      (p) =>
        this.currentCategory === null ||
        p.summary.category_id === this.currentCategory,
    );
    return rankProducts(
      items,
      (p) => p.summary.id,
      (p) => p.indices,
      this.state.scores,
      this.preferences,
      (id) => this.state.strictEnabled(id),
    );
  }

  async browseCategory(category: string): Promise<RankedEntry<RatableProduct>[]> {
    const page = await this.track(this.api.products(category));
    if (this.ontologyVersion !== null && page.ontology_version !== this.ontologyVersion) {
      // knowledge base changed under us: cached numbers are stale
      this.products.clear();
      this.tagDetails.clear();
      this.ontologyVersion = page.ontology_version;
    }
    this.currentCategory = category;
    for (const summary of page.items) {
      if (!this.products.has(summary.id)) {
        const response = await this.track(this.api.indices(summary.id));
        this.products.set(summary.id, { summary, indices: response.indices });
      }
    }
    return this.ranking();
  }

  /** Build the drill-down for one loaded product, all math local. */
  async explain(productId: string): Promise<ExplanationView> {
    const product = this.products.get(productId);
    if (!product) throw new Error(`product ${productId} not loaded`);
    const rating = rankProducts(
      [product],
      (p) => p.summary.id,
      (p) => p.indices,
      this.state.scores,
      this.preferences,
      (id) => this.state.strictEnabled(id),
    )[0].rating;

    const byPreference = explainByPreference(
      product.indices,
      this.state.scores,
      this.preferences,
    );
    const neutral = Object.keys(byPreference).length === 0;

    let degraded = false;
    let positiveTags: SignedContribution[] = [];
    let negativeTags: SignedContribution[] = [];
    if (!neutral && rating.strictViolation === null) {
      try {
        let detail = this.tagDetails.get(productId);
        if (!detail) {
          detail = await this.track(this.api.tagDetail(productId));
          this.tagDetails.set(productId, detail);
        }
        const byTag = explainByProductTag(
          detail,
          this.state.scores,
          this.preferences,
        );
        ({ positive: positiveTags, negative: negativeTags } = splitSigned(byTag));
      } catch {
        degraded = true;
      }
    }
    return {
      productId,
      rating,
      neutral,
      preferenceContributions: rating.strictViolation === null ? byPreference : {},
      positiveTags,
      negativeTags,
      degraded,
    };
  }

  private async track<T>(promise: Promise<T>): Promise<T> {
    try {
      const result = await promise;
      this.offline = false;
      return result;
    } catch (error) {
      this.offline = true;
      throw error;
    }
  }
}

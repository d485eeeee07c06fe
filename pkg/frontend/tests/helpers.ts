/** A fake /v1 server over the fixture file, with request recording. */

import type { FetchLike } from "../src/api.js";
import { loadFixtures, FixtureFile } from "./fixtures.js";
import type { KeyValueStore } from "../src/state.js";

export interface RecordedRequest {
  url: string;
  init?: { method?: string; body?: unknown };
}

export class FakeServer {
  readonly requests: RecordedRequest[] = [];
  failing = false;

  constructor(readonly fixtures: FixtureFile = loadFixtures()) {}

  get fetch(): FetchLike {
    return async (url, init) => {
      this.requests.push({ url, init });
      if (this.failing) throw new TypeError("network unreachable");
      const body = this.route(url);
      return {
        ok: body !== null,
        status: body !== null ? 200 : 404,
        json: async () => body ?? { detail: "not found" },
      };
    };
  }

  private route(url: string): unknown {
    const parsed = new URL(url);
    const path = parsed.pathname;
    if (path === "/v1/health") {
      return {
        status: "ok",
        ontology_version: this.fixtures.ontology_version,
        cache: "ready",
      };
    }
    if (path === "/v1/preferences") {
      return this.fixtures.preferences.map((p) => ({
        id: p.id,
        statement: `statement for ${p.id}`,
        description: "",
        category: p.category,
        strict: p.strict,
      }));
    }
    if (path === "/v1/products") {
      const category = parsed.searchParams.get("category");
      const items = Object.entries(this.fixtures.products)
        .filter(([, p]) => category === null || p.category_id === category)
        .map(([id, p]) => ({
          id,
          name: p.name,
          category_id: p.category_id,
          unit_price: null,
        }))
        .sort((a, b) => (a.id < b.id ? -1 : 1));
      return {
        page: 1,
        page_size: items.length,
        total: items.length,
        ontology_version: this.fixtures.ontology_version,
        items,
      };
    }
    const indexMatch = path.match(/^\/v1\/products\/([^/]+)\/indices$/);
    if (indexMatch) {
      const product = this.fixtures.products[decodeURIComponent(indexMatch[1])];
      if (!product) return null;
      return {
        product_id: decodeURIComponent(indexMatch[1]),
        ontology_version: this.fixtures.ontology_version,
        indices: product.indices,
      };
    }
    const detailMatch = path.match(/^\/v1\/products\/([^/]+)\/tag-detail$/);
    if (detailMatch) {
      const product = this.fixtures.products[decodeURIComponent(detailMatch[1])];
      if (!product) return null;
      return {
        ...product.tag_detail,
        ontology_version: this.fixtures.ontology_version,
      };
    }
    return null;
  }
}

export class MemoryStorage implements KeyValueStore {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }
}

/**
 * Read-only client for the /v1 index API.
 *
 * Every request is a parameterless-or-pagination GET; preference scores,
 * ratings and explanations are computed locally and never serialized
 * into a request.  The privacy test intercepts the injected fetch to
 * hold this module to that.
 */

import type {
  HealthResponse,
  IndexResponse,
  PreferenceMeta,
  ProductPage,
  TagDetail,
} from "./types.js";

export type FetchLike = (url: string, init?: { method?: string }) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.get("/v1/health");
  }

  preferences(): Promise<PreferenceMeta[]> {
    return this.get("/v1/preferences");
  }

  products(category?: string, page = 1, pageSize = 100): Promise<ProductPage> {
    const params = new URLSearchParams({
      page: String(page),
      page_size: String(pageSize),
    });
    if (category) params.set("category", category);
    return this.get(`/v1/products?${params.toString()}`);
  }

  indices(productId: string): Promise<IndexResponse> {
    return this.get(`/v1/products/${encodeURIComponent(productId)}/indices`);
  }

  tagDetail(productId: string): Promise<TagDetail> {
    return this.get(`/v1/products/${encodeURIComponent(productId)}/tag-detail`);
  }
}

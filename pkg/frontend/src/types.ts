/** Wire types for the read-only /v1 index API and derived view models. */

export interface PreferenceMeta {
  id: string;
  statement: string;
  description: string;
  category: string;
  strict: boolean;
}

export interface ProductSummary {
  id: string;
  name: string;
  category_id: string;
  unit_price: string | null;
}

export interface ProductPage {
  page: number;
  page_size: number;
  total: number;
  ontology_version: string;
  items: ProductSummary[];
}

export interface IndexResponse {
  product_id: string;
  ontology_version: string;
  indices: Record<string, number>;
}

export interface TagRow {
  id: string;
  name: string;
  associations: Record<string, number>;
}

export interface PreferenceTagRow {
  id: string;
  name: string;
  preference_ids: string[];
  aggregate: number;
  effective_aggregate: number;
  normalized: number;
  reference_positive: number | null;
  reference_negative: number | null;
}

export interface TagDetail {
  product_id: string;
  ontology_version?: string;
  tags: TagRow[];
  preference_tags: PreferenceTagRow[];
}

export interface HealthResponse {
  status: string;
  ontology_version: string | null;
  cache: string;
}

/** A product the client has everything for: summary plus served indices. */
export interface RatableProduct {
  summary: ProductSummary;
  indices: Record<string, number>;
}

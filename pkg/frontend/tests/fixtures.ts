/** Shared fixture loading for the test suite. */

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import type { TagDetail } from "../src/types.js";

export interface FixtureCase {
  user: string;
  product_id: string;
  scores: Record<string, number>;
  expected: {
    raw: number;
    scaled: number;
    strict_violation: string | null;
    by_preference?: Record<string, number>;
    by_product_tag?: Record<string, number>;
  };
}

export interface FixtureFile {
  ontology_version: string;
  constants: { s_mean: number; alpha: number; beta: number };
  preferences: { id: string; category: string; strict: boolean }[];
  products: Record<
    string,
    {
      name: string;
      category_id: string;
      indices: Record<string, number>;
      tag_detail: TagDetail;
    }
  >;
  cases: FixtureCase[];
}

export function loadFixtures(): FixtureFile {
  const here = dirname(fileURLToPath(import.meta.url));
  const path = join(here, "..", "fixtures", "cross_impl_fixtures.json");
  return JSON.parse(readFileSync(path, "utf-8")) as FixtureFile;
}

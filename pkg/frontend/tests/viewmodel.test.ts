import { expect, test } from "vitest";
import { ServiceError } from "../src/api.js";
import {
  communityColor,
  docPanel,
  MAX_RADIUS,
  MIN_RADIUS,
  radiusFor,
} from "../src/viewmodel.js";
import { DocumentsPage } from "../src/types.js";

test("community colors are distinct for small id sets and stable", () => {
  const ids = Array.from({ length: 20 }, (_, i) => i);
  const fills = ids.map(communityColor);
  expect(new Set(fills).size).toBe(ids.length);
  // pure function of the id: same input, same color, every time
  for (const id of ids) {
    expect(communityColor(id)).toBe(communityColor(id));
  }
});

test("radius is strictly increasing in doc count", () => {
  const small = radiusFor(100, 100, 400);
  const large = radiusFor(400, 100, 400);
  expect(large).toBeGreaterThan(small);

  const counts = [3, 10, 25, 80, 400];
  const radii = counts.map((c) => radiusFor(c, 3, 400));
  for (let i = 1; i < radii.length; i++) {
    expect(radii[i]).toBeGreaterThan(radii[i - 1]);
  }
});

test("radius stays inside the clamp band and degrades to the midpoint", () => {
  expect(radiusFor(100, 100, 400)).toBe(MIN_RADIUS);
  expect(radiusFor(400, 100, 400)).toBe(MAX_RADIUS);
  expect(radiusFor(25, 25, 25)).toBe((MIN_RADIUS + MAX_RADIUS) / 2);
});

function page(total: number, pageSize: number, n: number): DocumentsPage {
  return {
    schema_version: 1,
    topic: 4,
    filter_id: "f",
    total,
    page: 0,
    page_size: pageSize,
    documents: Array.from({ length: n }, (_, i) => ({
      id: `doc-${i}`,
      snippet: `snippet ${i}`,
    })),
  };
}

test("a topic with three filtered docs yields three snippet rows", () => {
  const panel = docPanel(4, page(3, 25, 3));
  expect(panel.rows).toHaveLength(3);
  expect(panel.notice).toBeNull();
  expect(panel.pages).toBe(1);
});

test("page size two over three docs makes two pages", () => {
  const panel = docPanel(4, page(3, 2, 2));
  expect(panel.pages).toBe(2);
});

test("zero filtered docs shows the empty-state notice", () => {
  const panel = docPanel(4, page(0, 25, 0));
  expect(panel.rows).toHaveLength(0);
  expect(panel.notice).toMatch(/no documents/);
});

test("an unknown topic becomes an empty panel with a notice", () => {
  const panel = docPanel(99, new ServiceError("GET /topics/99/documents failed (404)", 404));
  expect(panel.rows).toHaveLength(0);
  expect(panel.pages).toBe(0);
  expect(panel.notice).toMatch(/unknown/);
});

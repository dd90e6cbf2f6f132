// The analyst loop, driven end to end against the recorded service: load,
// render, filter, relabel, drill into documents. The recordings come from
// the bundled demo corpus, whose topic 0 is labeled "coral bleaching" on
// the full corpus but "reef ecosystems" once year=2000 removes the
// documents carrying the stronger phrase.

import { beforeEach, expect, test } from "vitest";
import { ApiClient, FilterForm } from "../src/api.js";
import { validateGraphPayload } from "../src/types.js";
import { ExplorerModel, Positions } from "../src/viewmodel.js";
import { FixtureService, fixture } from "./fixture-service.js";

const YEAR_2000: FilterForm = { facets: { year: "2000" }, keywords: [] };
const CORAL: FilterForm = { facets: {}, keywords: ["coral"] };
const EMPTY: FilterForm = { facets: {}, keywords: [] };

let service: FixtureService;
let model: ExplorerModel;

beforeEach(() => {
  service = new FixtureService();
  model = new ExplorerModel(new ApiClient("", service.fetch));
});

function grid(): Positions {
  const positions: Positions = new Map();
  for (let i = 0; i < 64; i++) positions.set(i, { x: (i % 8) * 90, y: Math.floor(i / 8) * 90 });
  return positions;
}

async function tick(): Promise<void> {
  await new Promise((res) => setTimeout(res, 0));
}

test("renders one sprite per payload node with distinct community colors", async () => {
  await model.load();
  const scene = model.scene(grid());
  const payload = model.payload!;

  expect(scene.nodes).toHaveLength(payload.nodes.length);
  expect(scene.edges).toHaveLength(payload.links.length);

  // same community, same fill; different communities, different fills
  const byCommunity = new Map<number, string>();
  for (const n of scene.nodes) {
    const seen = byCommunity.get(n.community);
    if (seen !== undefined) expect(n.fill).toBe(seen);
    byCommunity.set(n.community, n.fill);
  }
  expect(new Set(byCommunity.values()).size).toBe(byCommunity.size);
  expect(byCommunity.size).toBeGreaterThan(1);

  // every node carries its top label
  expect(scene.nodes.find((n) => n.id === 0)?.label).toBe("coral bleaching");
  expect(scene.nodes.every((n) => n.label.length > 0)).toBe(true);
});

test("node radius is monotone in doc count across the whole scene", async () => {
  // the demo corpus is balanced, so exercise the mapping on a payload
  // with spread-out counts
  const counts = [3, 10, 40, 100, 400];
  model = new ExplorerModel(
    new ApiClient("", async () => ({
      ok: true,
      status: 200,
      json: async () =>
        validateGraphPayload({
          schema_version: 1,
          directed: false,
          multigraph: false,
          graph: { threshold: 0.4 },
          filter_id: "base",
          nodes: counts.map((c, i) => ({
            id: i,
            label: `t${i}`,
            doc_count: c,
            community: i % 2,
            filtered_count: c,
          })),
          links: [],
        }),
    })),
  );
  await model.load();
  const byId = new Map(model.scene(grid()).nodes.map((n) => [n.id, n]));
  for (let i = 1; i < counts.length; i++) {
    expect(byId.get(i)!.radius).toBeGreaterThan(byId.get(i - 1)!.radius);
  }
});

test("an empty filter leaves every label as the initial view had it", async () => {
  await model.load();
  const before = model.payload!.nodes.map((n) => model.labelOf(n.id));
  await model.applyFilter(EMPTY);

  expect(model.error).toBeNull();
  const after = model.payload!.nodes.map((n) => model.labelOf(n.id));
  expect(after).toEqual(before);
});

test("the year facet round trip flips the coral topic label in place", async () => {
  await model.load();
  expect(model.labelOf(0)).toBe("coral bleaching");
  const versionBefore = model.labelVersion;

  await model.applyFilter(YEAR_2000);

  expect(model.error).toBeNull();
  expect(model.labelOf(0)).toBe("reef ecosystems");
  expect(model.labelVersion).toBe(versionBefore + 1);
  // filtered counts updated in place alongside the labels
  expect(model.countOf(0)).toBe(12);
  expect(model.activeFilterId).toBe(service.yearFilter.filter_id);

  const posts = service.posts().map((c) => c.path);
  expect(posts).toEqual(["/filter", "/relabel"]);
});

test("topics emptied by the filter are dimmed and lose their label", async () => {
  await model.load();
  await model.applyFilter(CORAL);

  expect(model.countOf(7)).toBe(0);
  expect(model.isEmptied(7)).toBe(true);
  expect(model.labelOf(7)).toBe("");

  const scene = model.scene(grid());
  const seven = scene.nodes.find((n) => n.id === 7)!;
  const zero = scene.nodes.find((n) => n.id === 0)!;
  expect(seven.dimmed).toBe(true);
  expect(zero.dimmed).toBe(false);
  expect(zero.label).toBe("coral bleaching");
  // edges touching a dimmed endpoint fade with it
  for (const e of scene.edges) {
    if (e.source === 7 || e.target === 7) expect(e.dimmed).toBe(true);
  }
});

test("a failed round trip leaves the view unchanged and can be retried", async () => {
  await model.load();
  const labels = model.payload!.nodes.map((n) => model.labelOf(n.id));
  const version = model.labelVersion;

  service.failNext = true;
  await model.applyFilter(YEAR_2000);

  expect(model.error).toMatch(/503/);
  expect(model.labelVersion).toBe(version);
  expect(model.payload!.nodes.map((n) => model.labelOf(n.id))).toEqual(labels);
  expect(model.activeFilterId).toBeNull();

  await model.retry();
  expect(model.error).toBeNull();
  expect(model.labelOf(0)).toBe("reef ecosystems");
});

test("a network-level failure surfaces as a retryable error too", async () => {
  await model.load();
  const labels = model.payload!.nodes.map((n) => model.labelOf(n.id));

  const inner = service.fetch;
  let drop = true;
  service.fetch = async (url, init) => {
    if (drop && url.includes("/filter")) {
      drop = false;
      throw new TypeError("fetch failed");
    }
    return inner(url, init);
  };
  model = new ExplorerModel(new ApiClient("", service.fetch));
  await model.load();

  await model.applyFilter(YEAR_2000);
  expect(model.error).toMatch(/unreachable/);
  expect(model.payload!.nodes.map((n) => model.labelOf(n.id))).toEqual(labels);

  await model.retry();
  expect(model.error).toBeNull();
  expect(model.labelOf(0)).toBe("reef ecosystems");
});

test("a newer filter supersedes one still in flight", async () => {
  await model.load();

  const gates: Array<() => void> = [];
  const inner = service.fetch;
  service.fetch = async (url, init) => {
    if (url.includes("/relabel")) {
      await new Promise<void>((release) => gates.push(release));
    }
    return inner(url, init);
  };
  model = new ExplorerModel(new ApiClient("", service.fetch));
  await model.load();

  const first = model.applyFilter(YEAR_2000);
  while (gates.length < 1) await tick();
  const second = model.applyFilter(CORAL);
  while (gates.length < 2) await tick();

  // let the newer one finish first, then release the stale response
  gates[1]();
  await second;
  expect(model.activeFilterId).toBe(service.coralFilter.filter_id);
  const version = model.labelVersion;

  gates[0]();
  await first;

  // the stale year-2000 responses were discarded
  expect(model.activeFilterId).toBe(service.coralFilter.filter_id);
  expect(model.labelVersion).toBe(version);
  expect(model.labelOf(0)).toBe("coral bleaching");
  expect(model.isEmptied(7)).toBe(true);
});

test("read paths never mutate the service", async () => {
  await model.load();
  model.scene(grid());
  await model.openTopic(0).catch(() => undefined);
  await model.load();

  expect(service.mutations).toBe(0);
  expect(service.calls.every((c) => c.method === "GET")).toBe(true);

  // and once a filter runs, the only non-GET traffic is the documented pair
  await model.applyFilter(YEAR_2000);
  const posts = service.posts();
  expect(posts.map((c) => `${c.method} ${c.path}`)).toEqual([
    "POST /filter",
    "POST /relabel",
  ]);
  expect(service.mutations).toBe(2);
});

test("drilldown honors the active filter and pages by ceiling division", async () => {
  await model.load();
  await model.applyFilter(YEAR_2000);

  const panel = await model.openTopic(0, 0, 5);
  expect(panel.rows).toHaveLength(5);
  expect(panel.pages).toBe(3); // 12 docs in pages of 5
  expect(panel.rows[0].id).toBe("doc-00-013");
  expect(panel.notice).toBeNull();

  const call = service.calls.at(-1)!;
  expect(call.path).toContain(`filter_id=${service.yearFilter.filter_id}`);
});

test("a topic emptied by the filter drills down to the empty-state notice", async () => {
  await model.load();
  await model.applyFilter(CORAL);

  const panel = await model.openTopic(7);
  expect(panel.rows).toHaveLength(0);
  expect(panel.notice).toMatch(/no documents/);
});

test("an unknown topic drills down to an empty panel with a notice", async () => {
  await model.load();
  const panel = await model.openTopic(99);
  expect(panel.rows).toHaveLength(0);
  expect(panel.notice).toMatch(/unknown/);
  expect(service.mutations).toBe(0);
});

test("clearing the filter restores the baseline without touching the service", async () => {
  await model.load();
  await model.applyFilter(YEAR_2000);
  expect(model.labelOf(0)).toBe("reef ecosystems");
  const callsBefore = service.calls.length;

  model.clearFilter();
  expect(model.labelOf(0)).toBe("coral bleaching");
  expect(model.countOf(0)).toBe(25);
  expect(model.activeFilterId).toBeNull();
  expect(service.calls.length).toBe(callsBefore);
});

test("the baseline payload matches the identity relabel recording", () => {
  // the service's batch labels and its identity-filter relabel agree, so
  // treating the payload labels as the unfiltered overlay is sound
  const graph = fixture<any>("graph.json");
  const identity = fixture<any>("relabel_identity.json");
  for (const node of graph.nodes) {
    expect(identity.labels[String(node.id)].labels[0]).toBe(node.label);
  }
});

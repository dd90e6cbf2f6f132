import { expect, test } from "vitest";
import { PayloadError, validateGraphPayload } from "../src/types.js";
import { fixture } from "./fixture-service.js";

test("accepts the recorded graph payload", () => {
  const payload = validateGraphPayload(fixture("graph.json"));
  expect(payload.nodes).toHaveLength(20);
  expect(payload.links.length).toBeGreaterThan(0);
});

test("accepts a single-node payload without links", () => {
  const payload = validateGraphPayload({
    schema_version: 1,
    directed: false,
    multigraph: false,
    graph: { threshold: 0.5 },
    filter_id: "abc",
    nodes: [{ id: 0, label: "only", doc_count: 3, community: 0, filtered_count: 3 }],
    links: [],
  });
  expect(payload.nodes[0].label).toBe("only");
});

test.each([
  ["not an object", null],
  ["missing nodes", { schema_version: 1, directed: false, multigraph: false, graph: { threshold: 0 }, filter_id: "x", links: [] }],
  ["directed graph", { schema_version: 1, directed: true, multigraph: false, graph: { threshold: 0 }, filter_id: "x", nodes: [], links: [] }],
  ["no schema_version", { directed: false, multigraph: false, graph: { threshold: 0 }, filter_id: "x", nodes: [], links: [] }],
])("rejects %s", (_why, bad) => {
  expect(() => validateGraphPayload(bad)).toThrow(PayloadError);
});

test("rejects structural defects inside nodes and links", () => {
  const base = fixture<any>("graph.json");

  const negCount = structuredClone(base);
  negCount.nodes[0].doc_count = -1;
  expect(() => validateGraphPayload(negCount)).toThrow(/doc_count/);

  const dupId = structuredClone(base);
  dupId.nodes[1].id = dupId.nodes[0].id;
  expect(() => validateGraphPayload(dupId)).toThrow(/duplicate/);

  const danglingEdge = structuredClone(base);
  danglingEdge.links[0].target = 999;
  expect(() => validateGraphPayload(danglingEdge)).toThrow(/unknown endpoint/);

  const zeroWeight = structuredClone(base);
  zeroWeight.links[0].weight = 0;
  expect(() => validateGraphPayload(zeroWeight)).toThrow(/weight/);
});

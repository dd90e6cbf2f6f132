// Wire types for the topic network service, plus structural validation of
// the one payload we render wholesale. A payload that fails validation is
// rejected before any drawing happens.

export interface GraphNode {
  id: number;
  label?: string;
  doc_count: number;
  community: number;
  filtered_count: number;
}

export interface GraphLink {
  source: number;
  target: number;
  weight: number;
}

export interface GraphPayload {
  schema_version: number;
  directed: boolean;
  multigraph: boolean;
  graph: { threshold: number };
  filter_id: string;
  nodes: GraphNode[];
  links: GraphLink[];
}

export interface FilterResponse {
  schema_version: number;
  filter_id: string;
  doc_count: number;
  per_topic_counts: Record<string, number>;
}

export interface TopicLabels {
  labels: string[];
  empty: boolean;
  degenerate: boolean;
}

export interface RelabelResponse {
  schema_version: number;
  filter_id: string;
  labels: Record<string, TopicLabels>;
}

export interface DocumentSnippet {
  id: string;
  snippet: string;
}

export interface DocumentsPage {
  schema_version: number;
  topic: number;
  filter_id: string;
  total: number;
  page: number;
  page_size: number;
  documents: DocumentSnippet[];
}

export class PayloadError extends Error {}

function fail(msg: string): never {
  throw new PayloadError(msg);
}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

export function validateGraphPayload(data: unknown): GraphPayload {
  if (!isRecord(data)) fail("graph payload is not an object");
  if (typeof data.schema_version !== "number") fail("missing schema_version");
  if (data.directed !== false || data.multigraph !== false) {
    fail("expected an undirected simple graph");
  }
  if (!isRecord(data.graph) || typeof data.graph.threshold !== "number") {
    fail("missing graph.threshold");
  }
  if (typeof data.filter_id !== "string") fail("missing filter_id");
  if (!Array.isArray(data.nodes)) fail("missing nodes");
  if (!Array.isArray(data.links)) fail("missing links");

  const ids = new Set<number>();
  for (const n of data.nodes) {
    if (!isRecord(n) || typeof n.id !== "number") fail("node without numeric id");
    if (typeof n.doc_count !== "number" || n.doc_count < 0) {
      fail(`node ${n.id}: bad doc_count`);
    }
    if (typeof n.community !== "number") fail(`node ${n.id}: bad community`);
    if (typeof n.filtered_count !== "number" || n.filtered_count < 0) {
      fail(`node ${n.id}: bad filtered_count`);
    }
    if (n.label !== undefined && typeof n.label !== "string") {
      fail(`node ${n.id}: bad label`);
    }
    if (ids.has(n.id)) fail(`duplicate node id ${n.id}`);
    ids.add(n.id);
  }
  for (const e of data.links) {
    if (!isRecord(e)) fail("link is not an object");
    if (typeof e.source !== "number" || typeof e.target !== "number") {
      fail("link without numeric endpoints");
    }
    if (!ids.has(e.source) || !ids.has(e.target)) {
      fail(`link ${e.source}-${e.target}: unknown endpoint`);
    }
    if (typeof e.weight !== "number" || !(e.weight > 0)) {
      fail(`link ${e.source}-${e.target}: bad weight`);
    }
  }
  return data as unknown as GraphPayload;
}

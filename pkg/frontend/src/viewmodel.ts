import { ApiClient, FilterForm, ServiceError } from "./api.js";
import { DocumentsPage, GraphPayload, TopicLabels } from "./types.js";

export const MIN_RADIUS = 8;
export const MAX_RADIUS = 28;

// Hue by golden angle: a pure function of the community id, so colors are
// stable across re-renders and well separated for small id sets.
export function communityColor(community: number): string {
  const hue = (community * 137.508) % 360;
  return `hsl(${hue.toFixed(1)}, 62%, 52%)`;
}

// Perceptual area scaling: radius follows sqrt(count), rescaled to the
// [MIN_RADIUS, MAX_RADIUS] band over the counts present in the view.
// Strictly increasing in count; all-equal counts collapse to the midpoint.
export function radiusFor(count: number, minCount: number, maxCount: number): number {
  if (maxCount <= minCount) return (MIN_RADIUS + MAX_RADIUS) / 2;
  const lo = Math.sqrt(minCount);
  const hi = Math.sqrt(maxCount);
  const t = (Math.sqrt(Math.max(count, 0)) - lo) / (hi - lo);
  return MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * Math.min(1, Math.max(0, t));
}

export interface NodeSprite {
  id: number;
  x: number;
  y: number;
  radius: number;
  fill: string;
  label: string;
  community: number;
  count: number;
  dimmed: boolean;
  selected: boolean;
}

export interface EdgeSprite {
  source: number;
  target: number;
  width: number;
  dimmed: boolean;
}

export interface Scene {
  nodes: NodeSprite[];
  edges: EdgeSprite[];
}

export type Positions = Map<number, { x: number; y: number }>;

export interface DocPanel {
  topic: number;
  rows: { id: string; snippet: string }[];
  page: number;
  pages: number;
  notice: string | null;
}

export function docPanel(topic: number, result: DocumentsPage | ServiceError): DocPanel {
  if (result instanceof ServiceError) {
    const notice =
      result.status === 404 ? `topic ${topic} is unknown` : result.message;
    return { topic, rows: [], page: 0, pages: 0, notice };
  }
  const pages = Math.ceil(result.total / result.page_size);
  return {
    topic,
    rows: result.documents.map((d) => ({ id: d.id, snippet: d.snippet })),
    page: result.page,
    pages,
    notice: result.total === 0 ? "no documents match the active filter" : null,
  };
}

// Labels and counts as currently displayed. Replaced wholesale on every
// successful filter round trip, never patched piecemeal, so a failed
// request cannot leave the view half-updated.
interface Overlay {
  version: number;
  labels: Map<number, string[]>;
  counts: Map<number, number>;
  empty: Set<number>;
  filterId: string | null;
  form: FilterForm | null;
}

export class ExplorerModel {
  payload: GraphPayload | null = null;
  error: string | null = null;
  selectedTopic: number | null = null;
  selectedCommunity: number | null = null;
  lastAttempt: FilterForm | null = null;

  private overlay: Overlay = {
    version: 0,
    labels: new Map(),
    counts: new Map(),
    empty: new Set(),
    filterId: null,
    form: null,
  };
  private ticket = 0;

  constructor(private readonly api: ApiClient) {}

  get labelVersion(): number {
    return this.overlay.version;
  }

  get activeFilterId(): string | null {
    return this.overlay.filterId;
  }

  labelOf(topic: number): string {
    const labels = this.overlay.labels.get(topic);
    return labels && labels.length > 0 ? labels[0] : "";
  }

  labelsOf(topic: number): string[] {
    return this.overlay.labels.get(topic) ?? [];
  }

  countOf(topic: number): number {
    return this.overlay.counts.get(topic) ?? 0;
  }

  isEmptied(topic: number): boolean {
    return this.overlay.empty.has(topic);
  }

  async load(): Promise<void> {
    // validation errors propagate to the caller: banner, no partial render
    const payload = await this.api.graph();
    const labels = new Map<number, string[]>();
    const counts = new Map<number, number>();
    for (const n of payload.nodes) {
      labels.set(n.id, n.label ? [n.label] : []);
      counts.set(n.id, n.filtered_count);
    }
    this.payload = payload;
    this.overlay = {
      version: this.overlay.version + 1,
      labels,
      counts,
      empty: new Set(),
      filterId: null,
      form: null,
    };
    this.error = null;
  }

  // POST /filter then POST /relabel, committing both responses at once.
  // A newer call supersedes any still in flight; the loser's responses
  // are discarded. On failure the overlay is untouched and `error` holds
  // the message for a retryable toast.
  async applyFilter(form: FilterForm): Promise<void> {
    if (!this.payload) throw new Error("applyFilter before load");
    this.lastAttempt = form;
    const ticket = ++this.ticket;
    try {
      const filter = await this.api.filter(form);
      const topics = this.payload.nodes.map((n) => n.id);
      const relabel = await this.api.relabel(filter.filter_id, topics);
      if (ticket !== this.ticket) return;

      const labels = new Map<number, string[]>();
      const counts = new Map<number, number>();
      const empty = new Set<number>();
      for (const n of this.payload.nodes) {
        counts.set(n.id, filter.per_topic_counts[String(n.id)] ?? 0);
        const got: TopicLabels | undefined = relabel.labels[String(n.id)];
        labels.set(n.id, got ? got.labels : this.labelsOf(n.id));
        if (got?.empty) empty.add(n.id);
      }
      this.overlay = {
        version: this.overlay.version + 1,
        labels,
        counts,
        empty,
        filterId: filter.filter_id,
        form,
      };
      this.error = null;
    } catch (err) {
      if (ticket !== this.ticket) return;
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  async retry(): Promise<void> {
    if (this.lastAttempt) await this.applyFilter(this.lastAttempt);
  }

  // Pure reset to the baseline the payload shipped with; no server call.
  clearFilter(): void {
    if (!this.payload) return;
    const labels = new Map<number, string[]>();
    const counts = new Map<number, number>();
    for (const n of this.payload.nodes) {
      labels.set(n.id, n.label ? [n.label] : []);
      counts.set(n.id, n.filtered_count);
    }
    this.ticket += 1; // orphan any in-flight round trip
    this.overlay = {
      version: this.overlay.version + 1,
      labels,
      counts,
      empty: new Set(),
      filterId: null,
      form: null,
    };
    this.error = null;
  }

  async openTopic(topic: number, page = 0, pageSize = 25): Promise<DocPanel> {
    this.selectedTopic = topic;
    try {
      const result = await this.api.documents(
        topic,
        this.overlay.filterId ?? undefined,
        page,
        pageSize,
      );
      return docPanel(topic, result);
    } catch (err) {
      if (err instanceof ServiceError) return docPanel(topic, err);
      throw err;
    }
  }

  scene(positions: Positions): Scene {
    if (!this.payload) return { nodes: [], edges: [] };
    const counts = this.payload.nodes.map((n) => this.countOf(n.id));
    const minCount = Math.min(...counts);
    const maxCount = Math.max(...counts);

    const nodes: NodeSprite[] = this.payload.nodes.map((n) => {
      const count = this.countOf(n.id);
      const pos = positions.get(n.id) ?? { x: 0, y: 0 };
      const deselected =
        this.selectedCommunity !== null && n.community !== this.selectedCommunity;
      return {
        id: n.id,
        x: pos.x,
        y: pos.y,
        radius: radiusFor(count, minCount, maxCount),
        fill: communityColor(n.community),
        label: this.labelOf(n.id),
        community: n.community,
        count,
        dimmed: count === 0 || this.isEmptied(n.id) || deselected,
        selected: n.id === this.selectedTopic,
      };
    });

    const dimmedIds = new Set(nodes.filter((n) => n.dimmed).map((n) => n.id));
    const edges: EdgeSprite[] = this.payload.links.map((e) => ({
      source: e.source,
      target: e.target,
      width: 0.8 + 2.2 * e.weight,
      dimmed: dimmedIds.has(e.source) || dimmedIds.has(e.target),
    }));
    return { nodes, edges };
  }
}

import {
  DocumentsPage,
  FilterResponse,
  GraphPayload,
  RelabelResponse,
  validateGraphPayload,
} from "./types.js";

// Thin fetch seam so tests can substitute a recorded service.
export interface HttpResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export interface RequestInitLike {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}

export type FetchLike = (url: string, init?: RequestInitLike) => Promise<HttpResponse>;

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status = 0,
  ) {
    super(message);
  }
}

export interface FilterForm {
  facets: Record<string, string>;
  keywords: string[];
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    let res: HttpResponse;
    try {
      res = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceError(`service unreachable: ${String(err)}`);
    }
    if (!res.ok) {
      throw new ServiceError(`${method} ${path} failed (${res.status})`, res.status);
    }
    return res.json();
  }

  async graph(filterId?: string, labels = true): Promise<GraphPayload> {
    const params = new URLSearchParams({ labels: String(labels) });
    if (filterId) params.set("filter_id", filterId);
    const raw = await this.request("GET", `/graph?${params}`);
    return validateGraphPayload(raw);
  }

  async filter(form: FilterForm): Promise<FilterResponse> {
    const raw = await this.request("POST", "/filter", {
      facets: form.facets,
      keywords: form.keywords,
    });
    return raw as FilterResponse;
  }

  async relabel(
    filterId: string,
    topics?: number[],
    c?: number,
    l?: number,
  ): Promise<RelabelResponse> {
    const body: Record<string, unknown> = { filter_id: filterId };
    if (topics !== undefined) body.topics = topics;
    if (c !== undefined) body.C = c;
    if (l !== undefined) body.L = l;
    return (await this.request("POST", "/relabel", body)) as RelabelResponse;
  }

  async documents(
    topic: number,
    filterId?: string,
    page = 0,
    pageSize = 25,
  ): Promise<DocumentsPage> {
    const params = new URLSearchParams({
      page: String(page),
      page_size: String(pageSize),
    });
    if (filterId) params.set("filter_id", filterId);
    const raw = await this.request("GET", `/topics/${topic}/documents?${params}`);
    return raw as DocumentsPage;
  }
}

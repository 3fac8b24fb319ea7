/** Thin client for the annotation service. All access to the backend goes
 * through this module; the fetch implementation is injectable for tests. */

import type {
  AnnotationRecord,
  AnnotationResponse,
  DocumentSummary,
  DocumentView,
  TagResponse,
} from "./types.js";

export interface MinimalResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<MinimalResponse>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path);
    if (!resp.ok) throw new ApiError(resp.status, `GET ${path} -> ${resp.status}`);
    return (await resp.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw new ApiError(resp.status, `POST ${path} -> ${resp.status}`);
    return (await resp.json()) as T;
  }

  getTagset(): Promise<{ schema_version: number; labels: string[] }> {
    return this.getJson("/api/tagset");
  }

  async getDocuments(): Promise<DocumentSummary[]> {
    const body = await this.getJson<{ documents: DocumentSummary[] }>(
      "/api/documents",
    );
    return body.documents;
  }

  getDocument(id: string, beta: number): Promise<DocumentView> {
    return this.getJson(
      `/api/documents/${encodeURIComponent(id)}?beta=${beta}`,
    );
  }

  tag(tokens: string[], beta: number): Promise<TagResponse> {
    return this.postJson("/api/tag", { tokens, beta });
  }

  annotate(record: AnnotationRecord): Promise<AnnotationResponse> {
    return this.postJson("/api/annotations", record);
  }

  async getExport(id: string): Promise<string> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/api/export/${encodeURIComponent(id)}`,
    );
    if (!resp.ok) throw new ApiError(resp.status, `export -> ${resp.status}`);
    return resp.text();
  }
}

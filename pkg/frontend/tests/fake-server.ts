/** In-memory stand-in for the annotation service, implementing the same
 * HTTP semantics: count-based posteriors, utility-optimal candidate sets,
 * an idempotent latest-wins annotation log, and TSV export. Exposes a
 * FetchLike so the client under test talks to it exactly as it would to
 * the real backend. */

import type { FetchLike, MinimalResponse } from "../src/api.js";
import type { AnnotationRecord } from "../src/types.js";

const SCHEMA_VERSION = 1;

function gBeta(k: number, s: number, beta: number): number {
  if (k === 1) return 1.0;
  return 1 - Math.pow((k - 1) / (s - 1), beta);
}

/** Best expected-utility prefix of the probability-sorted tag list. */
export function ubopSet(
  posterior: number[],
  labels: string[],
  beta: number,
): { tag: string; probability: number }[] {
  const s = labels.length;
  const order = labels
    .map((_, i) => i)
    .sort((a, b) => posterior[b] - posterior[a] || a - b);
  let mass = 0;
  let bestEu = -1;
  let bestK = 1;
  for (let k = 1; k <= s; k++) {
    mass += posterior[order[k - 1]];
    const eu = gBeta(k, s, beta) * mass;
    if (eu > bestEu) {
      bestEu = eu;
      bestK = k;
    }
  }
  return order
    .slice(0, bestK)
    .map((i) => ({ tag: labels[i], probability: posterior[i] }));
}

type TokenLine = [surface: string, gold: string];

function jsonResponse(status: number, body: unknown): MinimalResponse {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
    text: async () => JSON.stringify(body),
  };
}

function textResponse(status: number, body: string): MinimalResponse {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => JSON.parse(body),
    text: async () => body,
  };
}

export class FakeService {
  readonly labels: string[];
  /** Append-only log, one JSON line per accepted record. */
  log: string[] = [];
  /** Set to a positive number to make the next N mutating requests fail. */
  failNextAnnotations = 0;

  private readonly counts = new Map<string, Map<string, number>>();
  private readonly prior = new Map<string, number>();
  private total = 0;

  constructor(
    readonly docs: Record<string, TokenLine[]>,
    previousLog: string[] = [],
  ) {
    const labelSet = new Set<string>();
    for (const lines of Object.values(docs)) {
      for (const [surface, gold] of lines) {
        labelSet.add(gold);
        const word = surface.toLowerCase();
        const byTag = this.counts.get(word) ?? new Map();
        byTag.set(gold, (byTag.get(gold) ?? 0) + 1);
        this.counts.set(word, byTag);
        this.prior.set(gold, (this.prior.get(gold) ?? 0) + 1);
        this.total += 1;
      }
    }
    this.labels = [...labelSet].sort();
    this.log = [...previousLog];
  }

  posterior(surface: string): number[] {
    const byTag = this.counts.get(surface.toLowerCase());
    if (byTag) {
      const n = [...byTag.values()].reduce((a, b) => a + b, 0);
      return this.labels.map((t) => (byTag.get(t) ?? 0) / n);
    }
    return this.labels.map((t) => (this.prior.get(t) ?? 0) / this.total);
  }

  private tagged(surfaces: string[], beta: number) {
    return surfaces.map((surface) => ({
      surface,
      candidates: ubopSet(this.posterior(surface), this.labels, beta),
    }));
  }

  private decisions(docId: string): Map<number, string> {
    const latest = new Map<number, [number, number, string]>();
    this.log.forEach((line, order) => {
      const rec = JSON.parse(line) as AnnotationRecord;
      if (rec.document_id !== docId) return;
      const prev = latest.get(rec.token_index);
      if (!prev || rec.timestamp_ms >= prev[0]) {
        latest.set(rec.token_index, [rec.timestamp_ms, order, rec.chosen_tag]);
      }
    });
    return new Map([...latest].map(([i, [, , tag]]) => [i, tag]));
  }

  readonly fetch: FetchLike = async (url, init) => {
    const u = new URL(url, "http://fake");
    const path = u.pathname;
    const body = init?.body ? JSON.parse(init.body) : undefined;

    if (path === "/api/tagset") {
      return jsonResponse(200, {
        schema_version: SCHEMA_VERSION,
        labels: this.labels,
      });
    }
    if (path === "/api/documents") {
      return jsonResponse(200, {
        schema_version: SCHEMA_VERSION,
        documents: Object.entries(this.docs).map(([id, lines]) => ({
          id,
          tokens: lines.length,
        })),
      });
    }
    const docView = path.match(/^\/api\/documents\/([^/]+)$/);
    if (docView) {
      const id = decodeURIComponent(docView[1]);
      const lines = this.docs[id];
      if (!lines) return jsonResponse(404, { detail: "unknown document" });
      const beta = Number(u.searchParams.get("beta") ?? "1");
      if (!(beta > 0)) return jsonResponse(400, { detail: "bad beta" });
      return jsonResponse(200, {
        schema_version: SCHEMA_VERSION,
        id,
        beta,
        tokens: this.tagged(
          lines.map(([s]) => s),
          beta,
        ),
      });
    }
    if (path === "/api/tag" && init?.method === "POST") {
      const tokens = body?.tokens;
      const beta = body?.beta ?? 1.0;
      if (
        !Array.isArray(tokens) ||
        tokens.length === 0 ||
        tokens.some((t: unknown) => typeof t !== "string") ||
        !(beta > 0)
      ) {
        return jsonResponse(400, { detail: "malformed request" });
      }
      if (tokens.length > 5000) return jsonResponse(413, { detail: "too many" });
      return jsonResponse(200, {
        schema_version: SCHEMA_VERSION,
        beta,
        tokens: this.tagged(tokens, beta),
      });
    }
    if (path === "/api/annotations" && init?.method === "POST") {
      if (this.failNextAnnotations > 0) {
        this.failNextAnnotations -= 1;
        return jsonResponse(503, { detail: "unavailable" });
      }
      const rec = body as AnnotationRecord;
      const lines = this.docs[rec.document_id];
      if (!lines) return jsonResponse(404, { detail: "unknown document" });
      if (rec.token_index < 0 || rec.token_index >= lines.length) {
        return jsonResponse(422, { detail: "index out of range" });
      }
      if (!this.labels.includes(rec.chosen_tag)) {
        return jsonResponse(422, { detail: "unknown tag" });
      }
      const id = `${rec.document_id}:${rec.token_index}:${rec.annotator}:${rec.timestamp_ms}`;
      const created = !this.log.some(
        (l) => (JSON.parse(l) as { id: string }).id === id,
      );
      if (created) this.log.push(JSON.stringify({ id, ...rec }));
      return jsonResponse(201, { schema_version: SCHEMA_VERSION, id, created });
    }
    const exp = path.match(/^\/api\/export\/([^/]+)$/);
    if (exp) {
      const id = decodeURIComponent(exp[1]);
      const lines = this.docs[id];
      if (!lines) return jsonResponse(404, { detail: "unknown document" });
      const decided = this.decisions(id);
      const out = lines.map(([surface], i) => {
        const tag =
          decided.get(i) ??
          ubopSet(this.posterior(surface), this.labels, 0.001)[0].tag;
        return `${surface}\t${tag}`;
      });
      return textResponse(200, out.join("\n") + "\n");
    }
    return jsonResponse(404, { detail: "no route" });
  };
}

/** A small ambiguous document: "is" is VAFIN 3 times and VKFIN once, so it
 * stays uncertain at moderate beta while everything else is a singleton. */
export const DEMO_DOC: TokenLine[] = [
  ["Dat", "DDS"],
  ["is", "VAFIN"],
  ["vredebrake", "NA"],
  ["Dat", "DDS"],
  ["is", "VKFIN"],
  ["gud", "NA"],
  ["he", "PPER"],
  ["is", "VAFIN"],
  ["old", "ADJA"],
  ["Dat", "DDS"],
  ["is", "VAFIN"],
  ["recht", "NA"],
];

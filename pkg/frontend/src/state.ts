/** Session state for one annotator reviewing one document.
 *
 * Decisions are applied optimistically and queued; `sync()` pushes them to
 * the service and failed pushes stay queued for retry, so no decision is
 * lost to a flaky connection. */

import type { ApiClient } from "./api.js";
import type {
  AnnotationRecord,
  TaggedToken,
  TokenView,
} from "./types.js";

export type Choice = { rank: number } | { tag: string };

export interface StoreOptions {
  annotator: string;
  /** Clock injection point; defaults to Date.now. */
  now?: () => number;
}

function toViews(tokens: TaggedToken[]): TokenView[] {
  return tokens.map((t, index) => ({
    index,
    surface: t.surface,
    candidates: t.candidates.map((c, rank) => ({ ...c, rank })),
    flagged: t.candidates.length > 1,
  }));
}

export class AnnotatorStore {
  tokens: TokenView[] = [];
  cursor = 0;
  beta = 1.0;
  documentId: string | null = null;

  private queue: AnnotationRecord[] = [];
  private readonly annotator: string;
  private readonly now: () => number;

  constructor(
    private readonly api: ApiClient,
    opts: StoreOptions,
  ) {
    this.annotator = opts.annotator;
    this.now = opts.now ?? Date.now;
  }

  get pendingCount(): number {
    return this.queue.length;
  }

  /** Load a service-side document with candidate sets at the given beta. */
  async open(documentId: string, beta: number): Promise<void> {
    const view = await this.api.getDocument(documentId, beta);
    this.documentId = documentId;
    this.beta = beta;
    this.tokens = toViews(view.tokens);
    this.cursor = this.firstFlagged();
  }

  /** Tag an ad-hoc token list (no document identity, decisions stay local). */
  async openTokens(surfaces: string[], beta: number): Promise<void> {
    const resp = await this.api.tag(surfaces, beta);
    this.documentId = null;
    this.beta = beta;
    this.tokens = toViews(resp.tokens);
    this.cursor = this.firstFlagged();
  }

  private firstFlagged(): number {
    const i = this.tokens.findIndex((t) => t.flagged && t.decided === undefined);
    return i >= 0 ? i : 0;
  }

  get current(): TokenView | undefined {
    return this.tokens[this.cursor];
  }

  /** Record a decision for the token under the cursor and advance to the
   * next undecided flagged token. Rank choices must name an existing
   * candidate; tag choices may be overrides from outside the set. */
  decide(choice: Choice): void {
    const token = this.current;
    if (!token) return;
    let tag: string;
    let override = false;
    if ("rank" in choice) {
      const candidate = token.candidates[choice.rank];
      if (!candidate) return;
      tag = candidate.tag;
    } else {
      tag = choice.tag;
      override = !token.candidates.some((c) => c.tag === tag);
    }
    token.decided = tag;
    token.override = override;
    token.status = "pending";
    if (this.documentId !== null) {
      this.queue.push({
        document_id: this.documentId,
        token_index: token.index,
        chosen_tag: tag,
        annotator: this.annotator,
        timestamp_ms: this.now(),
      });
    } else {
      token.status = "synced";
    }
    this.nextFlagged();
  }

  /** Push queued decisions to the service; failures stay queued. */
  async sync(): Promise<void> {
    const remaining: AnnotationRecord[] = [];
    for (const record of this.queue) {
      const token = this.tokens[record.token_index];
      try {
        await this.api.annotate(record);
        if (token) token.status = "synced";
      } catch {
        if (token) token.status = "failed";
        remaining.push(record);
      }
    }
    this.queue = remaining;
  }

  /** Refetch candidate sets at a new beta; existing decisions survive. */
  async setBeta(beta: number): Promise<void> {
    if (this.documentId === null) {
      throw new Error("no document open");
    }
    const view = await this.api.getDocument(this.documentId, beta);
    const fresh = toViews(view.tokens);
    for (const token of fresh) {
      const old = this.tokens[token.index];
      if (old?.decided !== undefined) {
        token.decided = old.decided;
        token.override = !token.candidates.some((c) => c.tag === old.decided);
        token.status = old.status;
      }
    }
    this.tokens = fresh;
    this.beta = beta;
    this.cursor = Math.min(this.cursor, Math.max(this.tokens.length - 1, 0));
  }

  nextFlagged(): void {
    for (let i = this.cursor + 1; i < this.tokens.length; i++) {
      if (this.tokens[i].flagged && this.tokens[i].decided === undefined) {
        this.cursor = i;
        return;
      }
    }
    this.cursor = Math.min(this.cursor + 1, Math.max(this.tokens.length - 1, 0));
  }

  prevFlagged(): void {
    for (let i = this.cursor - 1; i >= 0; i--) {
      if (this.tokens[i].flagged) {
        this.cursor = i;
        return;
      }
    }
    this.cursor = Math.max(this.cursor - 1, 0);
  }
}

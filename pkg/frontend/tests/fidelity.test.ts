import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AnnotatorStore } from "../src/state.js";
import { renderTokens } from "../src/render.js";
import type { FetchLike } from "../src/api.js";

// A service response for the sentence "Dat is vredebrake": the copula is
// ambiguous between auxiliary and copular finite verb, the rest is certain.
const TAG_RESPONSE = {
  schema_version: 1,
  beta: 1.0,
  tokens: [
    { surface: "Dat", candidates: [{ tag: "DDS", probability: 1.0 }] },
    {
      surface: "is",
      candidates: [
        { tag: "VAFIN", probability: 0.75 },
        { tag: "VKFIN", probability: 0.25 },
      ],
    },
    { surface: "vredebrake", candidates: [{ tag: "NA", probability: 1.0 }] },
  ],
};

const mockFetch: FetchLike = async (url, init) => {
  expect(url).toBe("/api/tag");
  expect(init?.method).toBe("POST");
  return {
    ok: true,
    status: 200,
    json: async () => TAG_RESPONSE,
    text: async () => JSON.stringify(TAG_RESPONSE),
  };
};

describe("uncertain-token surfacing", () => {
  it("flags exactly the one ambiguous token", async () => {
    const store = new AnnotatorStore(new ApiClient("", mockFetch), {
      annotator: "expert",
    });
    await store.openTokens(["Dat", "is", "vredebrake"], 1.0);

    const flagged = store.tokens.filter((t) => t.flagged);
    expect(flagged).toHaveLength(1);
    expect(flagged[0].surface).toBe("is");
    expect(store.cursor).toBe(1);
  });

  it("lists both candidates in probability order in the popover", async () => {
    const store = new AnnotatorStore(new ApiClient("", mockFetch), {
      annotator: "expert",
    });
    await store.openTokens(["Dat", "is", "vredebrake"], 1.0);

    const popover = renderTokens(store.tokens, store.cursor)[1].popover;
    expect(popover).toHaveLength(2);
    expect(popover.map((p) => p.label)).toEqual(["VAFIN", "VKFIN"]);
    expect(popover[0].intensity).toBeGreaterThan(popover[1].intensity);
    expect(popover.map((p) => p.percent)).toEqual(["75.0%", "25.0%"]);
  });

  it("mutes singleton tokens and emphasizes the flagged one", async () => {
    const store = new AnnotatorStore(new ApiClient("", mockFetch), {
      annotator: "expert",
    });
    await store.openTokens(["Dat", "is", "vredebrake"], 1.0);

    const emphases = renderTokens(store.tokens, store.cursor).map(
      (t) => t.emphasis,
    );
    expect(emphases).toEqual(["muted", "flagged", "muted"]);
  });

  it("never invents candidates beyond the response", async () => {
    const store = new AnnotatorStore(new ApiClient("", mockFetch), {
      annotator: "expert",
    });
    await store.openTokens(["Dat", "is", "vredebrake"], 1.0);
    const shown = store.tokens.flatMap((t) =>
      t.candidates.map((c) => `${t.surface}:${c.tag}:${c.probability}`),
    );
    const served = TAG_RESPONSE.tokens.flatMap((t) =>
      t.candidates.map((c) => `${t.surface}:${c.tag}:${c.probability}`),
    );
    expect(shown).toEqual(served);
  });
});

/** Pure view construction: token strip descriptors plus an HTML string.
 * Singleton tokens are muted; multi-candidate tokens are emphasized and
 * carry a popover listing candidates with percentages. */

import type { TokenView } from "./types.js";

export interface PopoverEntry {
  label: string;
  /** Percentage with one decimal, e.g. "62.5%". */
  percent: string;
  /** 0..1; drives color intensity in the stylesheet. */
  intensity: number;
}

export interface TokenRender {
  index: number;
  surface: string;
  emphasis: "muted" | "flagged" | "decided";
  popover: PopoverEntry[];
  decidedTag?: string;
  override: boolean;
  cursor: boolean;
}

export function renderTokens(tokens: TokenView[], cursor: number): TokenRender[] {
  return tokens.map((t) => ({
    index: t.index,
    surface: t.surface,
    emphasis:
      t.decided !== undefined ? "decided" : t.flagged ? "flagged" : "muted",
    popover: t.candidates.map((c) => ({
      label: c.tag,
      percent: `${(c.probability * 100).toFixed(1)}%`,
      intensity: c.probability,
    })),
    decidedTag: t.decided,
    override: t.override ?? false,
    cursor: t.index === cursor,
  }));
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderHtml(tokens: TokenView[], cursor: number): string {
  const parts = renderTokens(tokens, cursor).map((t) => {
    const classes = ["token", t.emphasis];
    if (t.cursor) classes.push("cursor");
    if (t.override) classes.push("override");
    const popover = t.popover
      .map(
        (p) =>
          `<li style="opacity:${(0.35 + 0.65 * p.intensity).toFixed(2)}">` +
          `${escapeHtml(p.label)} ${p.percent}</li>`,
      )
      .join("");
    const decided = t.decidedTag
      ? `<span class="decision">${escapeHtml(t.decidedTag)}</span>`
      : "";
    return (
      `<span class="${classes.join(" ")}" data-index="${t.index}">` +
      `${escapeHtml(t.surface)}${decided}<ul class="popover">${popover}</ul></span>`
    );
  });
  return `<div class="token-strip">${parts.join("")}</div>`;
}

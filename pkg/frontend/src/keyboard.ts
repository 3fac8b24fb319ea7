/** Maps raw key presses to annotator actions so the whole document can be
 * completed without a mouse: digits accept a ranked candidate, arrows move
 * between flagged tokens, typed text becomes a manual override. */

import type { Choice } from "./state.js";

export type Action =
  | { kind: "decide"; choice: Choice }
  | { kind: "next" }
  | { kind: "prev" }
  | { kind: "buffer"; text: string }
  | { kind: "clear-buffer" }
  | { kind: "none" };

/** @param key        KeyboardEvent.key value
 *  @param buffer     text typed so far toward a manual override */
export function keyToAction(key: string, buffer: string): Action {
  if (key === "Enter") {
    return buffer.length > 0
      ? { kind: "decide", choice: { tag: buffer } }
      : { kind: "none" };
  }
  if (key === "Escape") return { kind: "clear-buffer" };
  if (key === "Backspace") {
    return buffer.length > 0
      ? { kind: "buffer", text: buffer.slice(0, -1) }
      : { kind: "none" };
  }
  if (buffer.length === 0) {
    if (key >= "1" && key <= "9") {
      return { kind: "decide", choice: { rank: Number(key) - 1 } };
    }
    if (key === "ArrowRight" || key === "ArrowDown") return { kind: "next" };
    if (key === "ArrowLeft" || key === "ArrowUp") return { kind: "prev" };
  }
  if (key.length === 1 && /[A-Za-z0-9$()]/.test(key)) {
    return { kind: "buffer", text: buffer + key.toUpperCase() };
  }
  return { kind: "none" };
}

export { ApiClient, ApiError } from "./api.js";
export type { FetchLike, MinimalResponse } from "./api.js";
export { AnnotatorStore } from "./state.js";
export type { Choice, StoreOptions } from "./state.js";
export { keyToAction } from "./keyboard.js";
export type { Action } from "./keyboard.js";
export { renderTokens, renderHtml } from "./render.js";
export type { TokenRender, PopoverEntry } from "./render.js";
export * from "./types.js";

/** Browser entry point: wires the store, keyboard mapping, and renderer to
 * the page. Expects the annotation service on the same origin. */

import { ApiClient } from "./api.js";
import { AnnotatorStore } from "./state.js";
import { keyToAction } from "./keyboard.js";
import { renderHtml } from "./render.js";

export async function mount(root: HTMLElement): Promise<void> {
  const api = new ApiClient("", (url, init) => fetch(url, init));
  const store = new AnnotatorStore(api, { annotator: "expert" });
  let buffer = "";

  const banner = document.createElement("div");
  banner.className = "banner";
  const strip = document.createElement("div");
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = "0.1";
  slider.max = "8";
  slider.step = "0.1";
  slider.value = "1";
  root.append(banner, slider, strip);

  const draw = () => {
    strip.innerHTML = renderHtml(store.tokens, store.cursor);
    const pending = store.pendingCount;
    banner.textContent =
      (buffer ? `override: ${buffer}  ` : "") +
      (pending > 0 ? `${pending} unsynced decision(s)` : "all synced");
  };

  const syncSoon = () => {
    void store.sync().then(draw, draw);
  };

  slider.addEventListener("change", () => {
    void store.setBeta(Number(slider.value)).then(draw, () => {
      banner.textContent = "refetch failed — retry by moving the slider";
    });
  });

  window.addEventListener("keydown", (event) => {
    const action = keyToAction(event.key, buffer);
    switch (action.kind) {
      case "decide":
        store.decide(action.choice);
        buffer = "";
        syncSoon();
        break;
      case "next":
        store.nextFlagged();
        break;
      case "prev":
        store.prevFlagged();
        break;
      case "buffer":
        buffer = action.text;
        break;
      case "clear-buffer":
        buffer = "";
        break;
      default:
        return;
    }
    event.preventDefault();
    draw();
  });

  const docs = await api.getDocuments();
  if (docs.length > 0) {
    await store.open(docs[0].id, Number(slider.value));
  }
  draw();
}

const rootEl = document.getElementById("app");
if (rootEl) void mount(rootEl);

import { fetchConfig, postQuery, ServiceError } from "./api.js";
import { parseAlphaList, runAlphaComparison } from "./alphaExplorer.js";
import { Panel } from "./panel.js";
import { markStale, renderError, renderResponse, renderTrace } from "./render.js";
import { initialState, type AblationToggles, type UiQueryState } from "./types.js";

const BASE_URL = "";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function readState(): UiQueryState {
  const state = initialState();
  state.query = el<HTMLInputElement>("query").value.trim();
  const alphaBox = el<HTMLInputElement>("alpha-enabled");
  if (alphaBox.checked) state.alpha = Number(el<HTMLInputElement>("alpha").value);
  const k = el<HTMLInputElement>("k").value;
  if (k) state.k = Number(k);
  const ablation: AblationToggles = {};
  if (!el<HTMLInputElement>("toggle-translator").checked) ablation.translator = false;
  if (!el<HTMLInputElement>("toggle-router").checked) ablation.router = false;
  if (!el<HTMLInputElement>("toggle-postprocessors").checked) ablation.postprocessors = false;
  if (Object.keys(ablation).length > 0) state.ablation = ablation;
  return state;
}

async function start(): Promise<void> {
  let urlTemplate = "/files/{file_id}";
  try {
    const config = await fetchConfig(BASE_URL);
    urlTemplate = config.ui.url_template;
  } catch {
    // config endpoint unreachable: keep the default template, stay usable
  }

  const panel = new Panel(BASE_URL);
  const responseBox = el<HTMLElement>("response");
  const traceBox = el<HTMLElement>("trace");

  el<HTMLInputElement>("alpha").addEventListener("input", () => {
    el<HTMLElement>("alpha-value").textContent = el<HTMLInputElement>("alpha").value;
  });

  el<HTMLFormElement>("search-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const state = readState();
    if (!state.query) {
      renderError(responseBox, "Enter a query first.");
      return;
    }
    markStale(responseBox);
    markStale(traceBox);
    panel
      .submit(state)
      .then((response) => {
        if (!response) return; // superseded by a newer submission
        renderResponse(responseBox, response, urlTemplate);
        renderTrace(traceBox, response);
      })
      .catch((error: unknown) => {
        const message = error instanceof ServiceError ? error.message : `unexpected error: ${error}`;
        renderError(responseBox, message);
      });
  });

  el<HTMLFormElement>("explorer-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const state = readState();
    const columnsBox = el<HTMLElement>("explorer-columns");
    if (!state.query) {
      renderError(columnsBox, "Enter a query first.");
      return;
    }
    let alphas: number[];
    try {
      alphas = parseAlphaList(el<HTMLInputElement>("explorer-alphas").value);
    } catch (error) {
      renderError(columnsBox, (error as Error).message);
      return;
    }
    markStale(columnsBox);
    runAlphaComparison(state, alphas, (request) => postQuery(BASE_URL, request))
      .then((columns) => {
        columnsBox.replaceChildren();
        columnsBox.classList.remove("stale");
        for (const column of columns) {
          const cell = document.createElement("div");
          cell.className = "explorer-column";
          const title = document.createElement("h3");
          title.textContent = `alpha = ${column.alpha}`;
          cell.append(title);
          const body = document.createElement("div");
          renderResponse(body, column.response, urlTemplate);
          cell.append(body);
          columnsBox.append(cell);
        }
      })
      .catch((error: unknown) => {
        renderError(columnsBox, error instanceof ServiceError ? error.message : String(error));
      });
  });
}

document.addEventListener("DOMContentLoaded", () => {
  void start();
});

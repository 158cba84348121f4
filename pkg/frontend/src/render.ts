import { buildChips, splitTextAroundMarkers } from "./chips.js";
import { buildTimeline, describeRoute } from "./trace.js";
import type { QueryResponse } from "./types.js";

function chipElement(fileId: string, href: string): HTMLAnchorElement {
  const chip = document.createElement("a");
  chip.className = "chip";
  chip.textContent = fileId;
  chip.href = href;
  chip.target = "_blank";
  chip.rel = "noopener";
  return chip;
}

export function renderResponse(
  container: HTMLElement,
  response: QueryResponse,
  urlTemplate: string,
): void {
  container.replaceChildren();
  container.classList.remove("stale");

  const text = document.createElement("p");
  text.className = "answer";
  const hrefs = new Map(buildChips(response, urlTemplate).map((c) => [c.fileId, c.href]));
  for (const part of splitTextAroundMarkers(response.text)) {
    if (part.kind === "text") {
      text.append(part.text);
    } else {
      text.append(chipElement(part.fileId, hrefs.get(part.fileId) ?? "#"));
    }
  }
  container.append(text);

  const meta = document.createElement("p");
  meta.className = "meta";
  const lang = response.language ?? "unknown";
  meta.textContent = `language: ${lang} · cited files: ${response.file_ids.length}`;
  container.append(meta);

  if (response.file_ids.length > 0) {
    const list = document.createElement("div");
    list.className = "chip-row";
    for (const chip of buildChips(response, urlTemplate)) {
      list.append(chipElement(chip.fileId, chip.href));
    }
    container.append(list);
  }
}

export function renderTrace(container: HTMLElement, response: QueryResponse): void {
  container.replaceChildren();
  const route = document.createElement("p");
  route.className = "meta";
  route.textContent = `route · ${describeRoute(response.trace)}`;
  container.append(route);

  const table = document.createElement("div");
  table.className = "timeline";
  for (const row of buildTimeline(response.trace)) {
    const line = document.createElement("div");
    line.className = "timeline-row";
    const label = document.createElement("span");
    label.className = "stage";
    label.textContent = row.stage;
    const bar = document.createElement("span");
    bar.className = "bar";
    bar.style.width = `${Math.max(1, Math.round(row.share * 240))}px`;
    const value = document.createElement("span");
    value.className = "ms";
    const nodes = row.nodeCount === null ? "" : ` · ${row.nodeCount} nodes`;
    value.textContent = `${row.ms.toFixed(2)} ms${nodes}`;
    line.append(label, bar, value);
    table.append(line);
  }
  container.append(table);

  if (response.trace.flags.length > 0) {
    const flags = document.createElement("p");
    flags.className = "flags";
    flags.textContent = `flags: ${response.trace.flags.join(", ")}`;
    container.append(flags);
  }
}

export function renderError(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = message;
  container.append(banner);
}

/** Mark the previous response visually stale while a request is in flight. */
export function markStale(container: HTMLElement): void {
  container.classList.add("stale");
}

// UI acceptance contract, run against a recorded mock-backed service fixture:
// the chips the UI renders must match the service's file_ids array exactly,
// and ablation toggles must round-trip into the request body verbatim.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { buildQueryRequest } from "../src/api.js";
import { buildChips, splitTextAroundMarkers } from "../src/chips.js";
import { initialState, type QueryResponse } from "../src/types.js";

interface FixtureCall {
  request: Record<string, unknown>;
  response: QueryResponse;
}

interface Fixture {
  config: { ui: { url_template: string } };
  calls: FixtureCall[];
}

const here = dirname(fileURLToPath(import.meta.url));
const fixture: Fixture = JSON.parse(
  readFileSync(join(here, "fixtures", "service_fixture.json"), "utf-8"),
);

const urlTemplate = fixture.config.ui.url_template;
const templateCalls = fixture.calls.slice(0, 3); // one per query template shape

describe("file-id chips against the recorded service responses", () => {
  it("covers all three query template shapes", () => {
    const queries = templateCalls.map((c) => String(c.request.query));
    expect(queries[0]).toMatch(/^Recommend some \w+ files about /);
    expect(queries[1]).toMatch(/^Retrieve some \w+ or \w+ files about /);
    expect(queries[2]).toMatch(/^Give me some files about /);
  });

  it("renders exactly the service's file_ids, in order", () => {
    for (const call of templateCalls) {
      const chips = buildChips(call.response, urlTemplate);
      expect(chips.map((c) => c.fileId)).toEqual(call.response.file_ids);
    }
  });

  it("every chip's text appears verbatim in the response text", () => {
    for (const call of fixture.calls) {
      for (const chip of buildChips(call.response, urlTemplate)) {
        expect(chip.verbatim).toBe(true);
        expect(call.response.text).toContain(chip.fileId);
      }
    }
  });

  it("chip links follow the configured url template", () => {
    const chips = buildChips(templateCalls[0].response, urlTemplate);
    for (const chip of chips) {
      expect(chip.href).toBe(urlTemplate.replace("{file_id}", chip.fileId));
    }
  });

  it("inline marker segmentation finds the same ids as the chips", () => {
    for (const call of templateCalls) {
      const inline = splitTextAroundMarkers(call.response.text)
        .filter((part) => part.kind === "chip")
        .map((part) => (part as { fileId: string }).fileId);
      // inline markers may repeat; de-duplicated order must match file_ids
      const seen: string[] = [];
      for (const id of inline) if (!seen.includes(id)) seen.push(id);
      expect(seen).toEqual(call.response.file_ids);
    }
  });
});

describe("request bodies", () => {
  it("ablation toggles round-trip into the request body verbatim", () => {
    const recorded = fixture.calls[3];
    const state = initialState();
    state.query = String(recorded.request.query);
    state.alpha = recorded.request.alpha as number;
    state.k = recorded.request.k as number;
    state.ablation = recorded.request.ablation as { router: boolean; postprocessors: boolean };
    expect(buildQueryRequest(state)).toEqual(recorded.request);
  });

  it("sends only documented schema fields", () => {
    const state = initialState();
    state.query = "Give me some files about wildlife";
    state.alpha = 0.4;
    state.ablation = { translator: false };
    const body = buildQueryRequest(state);
    const allowed = new Set(["query", "alpha", "k", "branch_k", "rerank_top_n", "ablation"]);
    for (const key of Object.keys(body)) expect(allowed.has(key)).toBe(true);
    expect(body).toEqual({
      query: "Give me some files about wildlife",
      alpha: 0.4,
      ablation: { translator: false },
    });
  });

  it("omits unset controls entirely so service defaults apply", () => {
    const state = initialState();
    state.query = "q";
    expect(buildQueryRequest(state)).toEqual({ query: "q" });
  });
});

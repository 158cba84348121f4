import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseAlphaList, runAlphaComparison } from "../src/alphaExplorer.js";
import { initialState, type QueryRequest, type QueryResponse } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = JSON.parse(
  readFileSync(join(here, "fixtures", "service_fixture.json"), "utf-8"),
) as { calls: { request: Record<string, unknown>; response: QueryResponse }[] };

const canned = fixture.calls[0].response;

function runnerReturning(byAlpha: Record<string, QueryResponse>) {
  const requests: QueryRequest[] = [];
  const run = async (request: QueryRequest) => {
    requests.push(request);
    return byAlpha[String(request.alpha)] ?? canned;
  };
  return { run, requests };
}

describe("alpha explorer", () => {
  it("fires the same query once per alpha, overriding only alpha", async () => {
    const state = initialState();
    state.query = "Recommend some image files about wildlife";
    const { run, requests } = runnerReturning({});
    const columns = await runAlphaComparison(state, [0.0, 0.5, 1.0], run);
    expect(columns.map((c) => c.alpha)).toEqual([0.0, 0.5, 1.0]);
    expect(requests.map((r) => r.alpha)).toEqual([0.0, 0.5, 1.0]);
    for (const request of requests) {
      expect(request.query).toBe(state.query);
    }
  });

  it("identical alphas produce identical columns", async () => {
    const state = initialState();
    state.query = "q";
    const { run } = runnerReturning({});
    const columns = await runAlphaComparison(state, [0.8, 0.8], run);
    expect(columns[0].response).toEqual(columns[1].response);
  });

  it("single alpha yields a single column", async () => {
    const state = initialState();
    state.query = "q";
    const { run } = runnerReturning({});
    const columns = await runAlphaComparison(state, [0.3], run);
    expect(columns).toHaveLength(1);
  });

  it("distinct responses per alpha stay attached to their columns", async () => {
    const state = initialState();
    state.query = "q";
    const zero = { ...canned, file_ids: ["1111111111"] };
    const one = { ...canned, file_ids: ["2222222222"] };
    const { run } = runnerReturning({ "0": zero, "1": one });
    const columns = await runAlphaComparison(state, [0.0, 1.0], run);
    expect(columns[0].response.file_ids).toEqual(["1111111111"]);
    expect(columns[1].response.file_ids).toEqual(["2222222222"]);
  });

  it("parses and bounds the alpha list", () => {
    expect(parseAlphaList("0.0, 0.8, 1.0")).toEqual([0.0, 0.8, 1.0]);
    expect(parseAlphaList("0.1,0.2,0.3,0.4")).toEqual([0.1, 0.2, 0.3]);
    expect(() => parseAlphaList("")).toThrow();
    expect(() => parseAlphaList("2.0")).toThrow();
    expect(() => parseAlphaList("a,b")).toThrow();
  });
});

import { buildQueryRequest } from "./api.js";
import type { QueryRequest, QueryResponse, UiQueryState } from "./types.js";

export interface AlphaColumn {
  alpha: number;
  response: QueryResponse;
}

export type QueryRunner = (request: QueryRequest) => Promise<QueryResponse>;

/**
 * Fire the same query once per alpha value so ranking shifts are visible
 * side by side before the operator commits to a setting.
 */
export async function runAlphaComparison(
  state: UiQueryState,
  alphas: number[],
  run: QueryRunner,
): Promise<AlphaColumn[]> {
  const columns: AlphaColumn[] = [];
  for (const alpha of alphas) {
    const request = { ...buildQueryRequest(state), alpha };
    columns.push({ alpha, response: await run(request) });
  }
  return columns;
}

export function parseAlphaList(raw: string): number[] {
  const values = raw
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map(Number);
  if (values.length === 0 || values.some((v) => Number.isNaN(v) || v < 0 || v > 1)) {
    throw new Error("alpha list must be comma-separated numbers in [0, 1]");
  }
  return values.slice(0, 3);
}

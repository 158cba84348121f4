import type { QueryRequest, QueryResponse, ServiceConfig, UiQueryState } from "./types.js";

/**
 * Build the POST /v1/query body from panel state.
 *
 * Emits only fields from the documented schema and forwards the ablation
 * toggles verbatim; unset controls are omitted entirely so the service
 * defaults apply.
 */
export function buildQueryRequest(state: UiQueryState): QueryRequest {
  const request: QueryRequest = { query: state.query };
  if (state.alpha !== null) request.alpha = state.alpha;
  if (state.k !== null) request.k = state.k;
  if (state.branchK !== null) request.branch_k = state.branchK;
  if (state.rerankTopN !== null) request.rerank_top_n = state.rerankTopN;
  if (state.ablation !== null) request.ablation = { ...state.ablation };
  return request;
}

export class ServiceError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

export async function postQuery(
  baseUrl: string,
  request: QueryRequest,
  signal?: AbortSignal,
): Promise<QueryResponse> {
  let response: Response;
  try {
    response = await fetch(`${baseUrl}/v1/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
      signal,
    });
  } catch (error) {
    if ((error as Error).name === "AbortError") throw error;
    throw new ServiceError(`service unreachable: ${(error as Error).message}`);
  }
  if (!response.ok) {
    const detail = await response.text().catch(() => "");
    throw new ServiceError(`service error ${response.status}: ${detail}`, response.status);
  }
  return (await response.json()) as QueryResponse;
}

export async function fetchConfig(baseUrl: string): Promise<ServiceConfig> {
  const response = await fetch(`${baseUrl}/v1/config`);
  if (!response.ok) throw new ServiceError(`config fetch failed (${response.status})`);
  return (await response.json()) as ServiceConfig;
}

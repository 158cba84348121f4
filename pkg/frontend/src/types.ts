/** Wire types mirroring the service's documented request/response schema. */

export interface AblationToggles {
  translator?: boolean;
  router?: boolean;
  postprocessors?: boolean;
}

/** POST /v1/query body. Only these fields; the service rejects extras. */
export interface QueryRequest {
  query: string;
  alpha?: number;
  k?: number;
  branch_k?: number;
  rerank_top_n?: number;
  ablation?: AblationToggles;
}

export interface RouteInfo {
  method: string | null;
  engines: string[];
  rationale: string;
  per_engine_counts: Record<string, Record<string, number>>;
}

export interface QueryTrace {
  language: string | null;
  language_confidence: number;
  translation_degraded: boolean;
  route: RouteInfo;
  stage_node_ids: Record<string, string[]>;
  stage_ms: Record<string, number>;
  flags: string[];
}

export interface QueryResponse {
  text: string;
  file_ids: string[];
  language: string | null;
  trace: QueryTrace;
}

export interface ServiceConfig {
  config: Record<string, unknown>;
  ui: { url_template: string };
}

/** One search panel's working state; controls mirror the override schema. */
export interface UiQueryState {
  query: string;
  alpha: number | null;
  k: number | null;
  branchK: number | null;
  rerankTopN: number | null;
  ablation: AblationToggles | null;
  lastResponse: QueryResponse | null;
  inFlight: boolean;
}

export function initialState(): UiQueryState {
  return {
    query: "",
    alpha: null,
    k: null,
    branchK: null,
    rerankTopN: null,
    ablation: null,
    lastResponse: null,
    inFlight: false,
  };
}

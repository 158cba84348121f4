import type { QueryTrace } from "./types.js";

/** Fixed pipeline stage order; the service's trace always carries all six. */
export const STAGE_ORDER = [
  "translate",
  "route",
  "retrieve",
  "postprocess",
  "synthesize",
  "backtranslate",
] as const;

export interface StageRow {
  stage: string;
  ms: number;
  /** share of the total, in [0, 1], for bar widths */
  share: number;
  nodeCount: number | null;
}

export function buildTimeline(trace: QueryTrace): StageRow[] {
  const total = STAGE_ORDER.reduce((sum, stage) => sum + (trace.stage_ms[stage] ?? 0), 0);
  return STAGE_ORDER.map((stage) => {
    const ms = trace.stage_ms[stage] ?? 0;
    const ids = trace.stage_node_ids[stage];
    return {
      stage,
      ms,
      share: total > 0 ? ms / total : 0,
      nodeCount: ids ? ids.length : null,
    };
  });
}

export function describeRoute(trace: QueryTrace): string {
  const { method, engines } = trace.route;
  if (!method) return "no routing information";
  return `${method}: ${engines.join(", ")}`;
}

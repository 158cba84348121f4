import { buildQueryRequest, postQuery } from "./api.js";
import type { QueryRequest, QueryResponse, UiQueryState } from "./types.js";

/**
 * One in-flight request per panel: a newer submission aborts and supersedes
 * the previous one, so responses can never arrive out of order.
 */
export class Panel {
  private controller: AbortController | null = null;
  private generation = 0;

  constructor(private readonly baseUrl: string) {}

  async submit(state: UiQueryState, overrides?: Partial<QueryRequest>): Promise<QueryResponse | null> {
    this.controller?.abort();
    this.controller = new AbortController();
    const generation = ++this.generation;
    const request = { ...buildQueryRequest(state), ...overrides };
    try {
      const response = await postQuery(this.baseUrl, request, this.controller.signal);
      return generation === this.generation ? response : null;
    } catch (error) {
      if ((error as Error).name === "AbortError") return null;
      throw error;
    }
  }
}

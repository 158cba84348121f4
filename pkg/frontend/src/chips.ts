import type { QueryResponse } from "./types.js";

export interface Chip {
  fileId: string;
  href: string;
  /** True when the id appears verbatim in the response text (it must). */
  verbatim: boolean;
}

/**
 * One chip per cited file id, in the service's order.
 *
 * Chips are derived from the response's file_ids array, never re-parsed from
 * the text, so the UI can't disagree with the service about what was cited.
 */
export function buildChips(response: QueryResponse, urlTemplate: string): Chip[] {
  return response.file_ids.map((fileId) => ({
    fileId,
    href: urlTemplate.replace("{file_id}", fileId),
    verbatim: response.text.includes(fileId),
  }));
}

const MARKER = /\[file_id:\s*(\d+)\]/g;

/** Split response text into plain segments and chip references, in order. */
export type TextPart = { kind: "text"; text: string } | { kind: "chip"; fileId: string };

export function splitTextAroundMarkers(text: string): TextPart[] {
  const parts: TextPart[] = [];
  let last = 0;
  for (const match of text.matchAll(MARKER)) {
    const index = match.index ?? 0;
    if (index > last) parts.push({ kind: "text", text: text.slice(last, index) });
    parts.push({ kind: "chip", fileId: match[1] });
    last = index + match[0].length;
  }
  if (last < text.length) parts.push({ kind: "text", text: text.slice(last) });
  return parts;
}

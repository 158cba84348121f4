"""Query routing across the four per-filetype engines.

An LLM selector picks the engines; if its reply cannot be parsed or the
provider fails, a deterministic keyword fallback fires so that routing is
total: every query yields a non-empty decision. Selected engines run the
hybrid retriever against their own index pair and a score-level summarizer
merges the per-engine results into one ranked list.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .corpus import ENGINE_ORDER, FileType
from .errors import MissingIndex, ProviderError
from .indexing import TypedIndexSet, tokenize
from .retrieval import RetrievalParams, ScoredNode, hybrid_retrieve

# Keyword fallback vocabulary. Korean filetype terms are included so routing
# stays language-capable even when the translator is ablated, matching the
# multilingual selector it backs up. A generic word like "file" deliberately
# signals nothing: it appears in every template.
KEYWORDS: dict[FileType, frozenset[str]] = {
    FileType.IMAGE: frozenset({"image", "photo", "picture", "이미지", "사진"}),
    FileType.AUDIO: frozenset({"audio", "sound", "recording", "오디오", "소리"}),
    FileType.VIDEO: frozenset({"video", "clip", "footage", "비디오", "영상"}),
    FileType.DOCUMENT: frozenset({"document", "text", "report", "문서", "텍스트"}),
}

SELECTOR_PREFIX = "Select the archive search engines needed to answer the query."


def scan_filetype_keywords(text: str) -> tuple[FileType, ...]:
    """Case-insensitive keyword scan with simple English plural folding."""
    tokens = set(tokenize(text))
    folded = tokens | {t[:-1] for t in tokens if t.endswith("s")}
    return tuple(ft for ft in ENGINE_ORDER if folded & KEYWORDS[ft])

_ENGINE_DESCRIPTIONS = {
    FileType.IMAGE: "photographs and other still images",
    FileType.AUDIO: "sound recordings and other audio",
    FileType.VIDEO: "video footage and clips",
    FileType.DOCUMENT: "text documents and reports",
}

_JSON_ARRAY_RE = re.compile(r"\[[^\[\]]*\]")


@dataclass
class RouteDecision:
    engines: tuple[FileType, ...]  # always in ENGINE_ORDER, never empty
    method: str  # "llm_selector" | "rule_fallback"
    rationale: str


@dataclass
class EngineResult:
    file_type: FileType
    nodes: list[ScoredNode]
    partial_answer: str | None = None
    missing_index: bool = False


def selector_prompt(query_en: str) -> str:
    tools = "\n".join(
        f"- {ft.value}: searches {_ENGINE_DESCRIPTIONS[ft]}" for ft in ENGINE_ORDER
    )
    return (
        f"{SELECTOR_PREFIX}\n"
        f"Available engines:\n{tools}\n"
        f"Query: {query_en}\n"
        "Reply with only a JSON array of engine names."
    )


def _parse_selector_reply(reply: str) -> tuple[FileType, ...] | None:
    match = _JSON_ARRAY_RE.search(reply)
    if not match:
        return None
    try:
        names = json.loads(match.group(0))
    except json.JSONDecodeError:
        return None
    if not isinstance(names, list) or not names:
        return None
    valid = {ft.value for ft in ENGINE_ORDER}
    picked: set[str] = set()
    for name in names:
        if not isinstance(name, str) or name.lower() not in valid:
            return None
        picked.add(name.lower())
    return tuple(ft for ft in ENGINE_ORDER if ft.value in picked)


def rule_fallback(query: str) -> RouteDecision:
    """Deterministic keyword routing; no keyword means all four engines."""
    selected = scan_filetype_keywords(query)
    if selected:
        return RouteDecision(
            selected, "rule_fallback", f"matched keywords for {[ft.value for ft in selected]}"
        )
    return RouteDecision(tuple(ENGINE_ORDER), "rule_fallback", "no filetype keyword; selecting every engine")


def classify_query(query_en: str, llm) -> RouteDecision:
    """Total classification: LLM selector with a deterministic rule fallback."""
    try:
        reply = llm.complete(selector_prompt(query_en))
    except ProviderError:
        return rule_fallback(query_en)
    engines = _parse_selector_reply(reply)
    if engines:
        return RouteDecision(engines, "llm_selector", f"selector reply: {reply.strip()[:120]}")
    return rule_fallback(query_en)


def route_and_query(
    query_en: str,
    decision: RouteDecision,
    index_set: TypedIndexSet,
    params: RetrievalParams,
    embedder,
) -> list[EngineResult]:
    """Run the hybrid retriever on each selected engine, in fixed order.

    An engine whose filetype has no index (the corpus held no such files) is
    skipped with an empty result rather than failing the query.
    """
    results: list[EngineResult] = []
    for file_type in ENGINE_ORDER:
        if file_type not in decision.engines:
            continue
        try:
            pair = index_set.pair_for(file_type)
        except MissingIndex:
            results.append(EngineResult(file_type=file_type, nodes=[], missing_index=True))
            continue
        nodes = hybrid_retrieve(query_en, pair, params, embedder)
        results.append(EngineResult(file_type=file_type, nodes=nodes))
    return results


def summarize_results(results: list[EngineResult], final_k: int) -> list[ScoredNode]:
    """Score-level merge of per-engine node lists, truncated to final_k."""
    if not results:
        raise ValueError("summarize_results needs at least one engine result")
    nodes = [n for r in results for n in r.nodes]
    nodes.sort(key=lambda n: (-(n.hybrid_score or 0.0), n.chunk_id))
    return nodes[:final_k]

"""Post-retrieval node refinement: reranking and long-context reordering.

Both processors are enhancers, not gates: a reranker failure returns the
input unchanged with a degradation flag, and disabling both makes this stage
the identity function on node lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ProviderError
from .indexing import Chunk
from .retrieval import ScoredNode


@dataclass
class PostProcessConfig:
    rerank_enabled: bool = True
    rerank_top_n: int = 5
    reorder_enabled: bool = True

    def validate(self) -> None:
        if self.rerank_top_n < 1:
            raise ValueError("rerank_top_n must be >= 1")


def _relevance(node: ScoredNode) -> float:
    if node.rerank_score is not None:
        return node.rerank_score
    if node.hybrid_score is not None:
        return node.hybrid_score
    return 0.0


def rerank(
    query_en: str,
    nodes: list[ScoredNode],
    chunk_lookup: Mapping[str, Chunk],
    provider,
    top_n: int,
) -> list[ScoredNode]:
    """Provider-scored reordering of (query, chunk text) pairs, cut to top_n."""
    if not nodes:
        return []
    texts = [chunk_lookup[n.chunk_id].text for n in nodes]
    scores = provider.rerank_scores(query_en, texts)
    for node, score in zip(nodes, scores):
        node.rerank_score = score
    reranked = sorted(nodes, key=lambda n: (-n.rerank_score, n.chunk_id))
    return reranked[:top_n]


def long_context_reorder(nodes: list[ScoredNode]) -> list[ScoredNode]:
    """Place the most relevant nodes at the extremes of the list.

    Relevance ranks r1..rn map to [r1, r3, r5, ..., r6, r4, r2]: odd ranks
    fill from the front, even ranks from the back, so the two best nodes sit
    first and last where a long-context model attends most. Output is a
    permutation of the input.
    """
    ranked = sorted(nodes, key=lambda n: (-_relevance(n), n.chunk_id))
    front = ranked[0::2]
    back = ranked[1::2]
    return front + back[::-1]


def apply_postprocessors(
    query_en: str,
    nodes: list[ScoredNode],
    chunk_lookup: Mapping[str, Chunk],
    reranker,
    config: PostProcessConfig,
) -> tuple[list[ScoredNode], list[str]]:
    """Run the configured processors; returns (nodes, degradation flags)."""
    config.validate()
    flags: list[str] = []
    out = list(nodes)
    if config.rerank_enabled and out:
        try:
            out = rerank(query_en, out, chunk_lookup, reranker, config.rerank_top_n)
        except ProviderError:
            flags.append("rerank_failed")
            out = list(nodes)
    if config.reorder_enabled and out:
        out = long_context_reorder(out)
    return out, flags

"""Hybrid retrieval: BM25 and vector branches fused by an alpha weight.

    hybrid = alpha * vector_norm + (1 - alpha) * bm25_norm

Raw branch scores live on incomparable scales (BM25 unbounded, cosine
bounded), so each branch is min-max normalized per query over the candidate
pool before fusing. The pool is the union of both branches' top-k results; a
node absent from a branch enters that branch's pool at raw score 0, which is
what BM25 would assign a no-term-match chunk. Consequence: at alpha=0 the
fused ranking is exactly the BM25-only ranking over the union, and at
alpha=1 exactly the vector-only ranking. Every ranking breaks ties by
ascending chunk_id.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, NoScoresForBranch
from .indexing import Bm25Index, EmbeddingVector, IndexPair, VectorIndex, cosine, embed, tokenize


@dataclass
class ScoredNode:
    """A retrieved chunk and the scores it accumulated along the pipeline."""

    chunk_id: str
    file_id: str
    bm25_score: float | None = None
    vector_score: float | None = None
    bm25_norm: float | None = None
    vector_norm: float | None = None
    hybrid_score: float | None = None
    rerank_score: float | None = None


@dataclass
class RetrievalParams:
    alpha: float = 0.8
    top_k_per_branch: int = 10
    final_k: int = 10

    def validate(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.top_k_per_branch < 1:
            raise ValueError("top_k_per_branch must be >= 1")
        if self.final_k < 1:
            raise ValueError("final_k must be >= 1")


def _file_id_of(chunk_id: str) -> str:
    return chunk_id.split("#", 1)[0]


def bm25_search(index: Bm25Index, query: str, k: int) -> list[ScoredNode]:
    """Top-k chunks by BM25, descending; only chunks matching >= 1 term."""
    scores = index.score_all(tokenize(query))
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return [
        ScoredNode(chunk_id=cid, file_id=_file_id_of(cid), bm25_score=score)
        for cid, score in ranked[:k]
    ]


def vector_search(index: VectorIndex, query_vec: EmbeddingVector, k: int) -> list[ScoredNode]:
    """Top-k chunks by exact cosine similarity (flat scan), descending."""
    if query_vec.dims != index.dims:
        raise DimensionMismatch(f"query dims {query_vec.dims} != index dims {index.dims}")
    scored = [
        (cid, cosine(query_vec.values, vec.values)) for cid, vec in index.entries.items()
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [
        ScoredNode(chunk_id=cid, file_id=_file_id_of(cid), vector_score=score)
        for cid, score in scored[:k]
    ]


def normalize_scores(nodes: list[ScoredNode], branch: str) -> list[ScoredNode]:
    """Min-max normalize a branch over the candidate pool, in place.

    Unset branch scores enter the pool at raw 0.0. Degenerate pool
    (max == min) maps every value to 1.0 so a sole matching branch still
    contributes. Requires at least one node with the branch score set.
    """
    if branch not in ("bm25", "vector"):
        raise ValueError(f"unknown branch {branch!r}")
    attr = f"{branch}_score"
    norm_attr = f"{branch}_norm"
    raw = [getattr(n, attr) for n in nodes]
    if all(v is None for v in raw):
        raise NoScoresForBranch(f"no {branch} scores present in the pool")
    values = [0.0 if v is None else v for v in raw]
    lo = min(values)
    hi = max(values)
    for node, value in zip(nodes, values):
        norm = 1.0 if hi == lo else (value - lo) / (hi - lo)
        setattr(node, norm_attr, norm)
    return nodes


def fuse(alpha: float, vector_norm: float | None, bm25_norm: float | None) -> float:
    """The hybrid score; a missing branch contributes 0."""
    v = 0.0 if vector_norm is None else vector_norm
    b = 0.0 if bm25_norm is None else bm25_norm
    return alpha * v + (1.0 - alpha) * b


def hybrid_retrieve(
    query: str,
    indices: IndexPair,
    params: RetrievalParams,
    embedder,
) -> list[ScoredNode]:
    """Run both branches, fuse over their union, return the final_k best."""
    params.validate()
    bm25_nodes = bm25_search(indices.bm25, query, params.top_k_per_branch)
    query_vec = embed(query, embedder)
    vector_nodes = vector_search(indices.vectors, query_vec, params.top_k_per_branch)

    merged: dict[str, ScoredNode] = {}
    for node in bm25_nodes:
        merged[node.chunk_id] = node
    for node in vector_nodes:
        existing = merged.get(node.chunk_id)
        if existing is None:
            merged[node.chunk_id] = node
        else:
            existing.vector_score = node.vector_score
    pool = sorted(merged.values(), key=lambda n: n.chunk_id)
    if not pool:
        return []

    if bm25_nodes:
        normalize_scores(pool, "bm25")
    if vector_nodes:
        normalize_scores(pool, "vector")
    for node in pool:
        node.hybrid_score = fuse(params.alpha, node.vector_norm, node.bm25_norm)
    pool.sort(key=lambda n: (-n.hybrid_score, n.chunk_id))
    return pool[: params.final_k]

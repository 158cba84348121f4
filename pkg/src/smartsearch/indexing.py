"""Chunking, embedding, and the per-filetype index pair (BM25 + vectors).

Scoring math is deliberately plain Python with a pinned iteration order
(ascending positions, left-to-right accumulation) so that an independent
reimplementation of the documented formulas reproduces every score
bit-for-bit. Corpus sizes here are desk scale; no approximate structures.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .corpus import CorpusStore, FileType
from .errors import (
    EmptyIndexInput,
    InvalidChunkParams,
    MissingIndex,
    ProviderError,
    UnknownIndexVersion,
)

INDEX_FORMAT_VERSION = 1

# Unicode word runs, underscore excluded: punctuation splits, case folded.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased Unicode word segmentation; deterministic, punctuation stripped."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Chunk:
    """One indexed unit of text. chunk_id is ``<file_id>#<ordinal>``."""

    chunk_id: str
    file_id: str
    ordinal: int
    text: str
    token_count: int


def chunk_text(file_id: str, text: str, chunk_size: int, overlap: int) -> list[Chunk]:
    """Split a token stream into sliding windows of at most chunk_size tokens.

    Consecutive windows share ``overlap`` tokens; removing the overlap and
    concatenating reproduces the token stream. The final window may be short.
    """
    if overlap < 0 or chunk_size <= overlap:
        raise InvalidChunkParams(f"need chunk_size > overlap >= 0, got {chunk_size}/{overlap}")
    tokens = tokenize(text)
    if not tokens:
        return []
    step = chunk_size - overlap
    chunks: list[Chunk] = []
    start = 0
    while True:
        window = tokens[start : start + chunk_size]
        ordinal = len(chunks)
        chunks.append(
            Chunk(
                chunk_id=f"{file_id}#{ordinal}",
                file_id=file_id,
                ordinal=ordinal,
                text=" ".join(window),
                token_count=len(window),
            )
        )
        if start + chunk_size >= len(tokens):
            break
        start += step
    return chunks


@dataclass
class EmbeddingVector:
    dims: int
    values: list[float]

    def validate(self) -> None:
        if self.dims <= 0 or len(self.values) != self.dims:
            raise ValueError(f"expected {self.dims} values, got {len(self.values)}")
        for v in self.values:
            if not math.isfinite(v):
                raise ValueError("embedding contains a non-finite value")


def embed(text: str, provider) -> EmbeddingVector:
    """Embed text through the configured provider; always finite, fixed dims."""
    if not text:
        raise ProviderError("empty input")
    values = provider.embed_values(text)
    vec = EmbeddingVector(dims=provider.dims, values=list(values))
    vec.validate()
    return vec


@dataclass
class Bm25Index:
    """Okapi BM25 inverted index over chunks.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)), which is nonnegative for
    every df <= N, so downstream min-max fusion never sees negative scores.
    """

    postings: dict[str, list[tuple[str, int]]]
    doc_lengths: dict[str, int]
    avg_doc_length: float
    doc_count: int
    k1: float = 1.2
    b: float = 0.75

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        if df == 0:
            return 0.0
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))

    def score_all(self, query_tokens: list[str]) -> dict[str, float]:
        """Score every chunk containing at least one query term.

        A chunk with no query term scores exactly 0 and is omitted. Query
        tokens are accumulated left to right, once per occurrence.
        """
        scores: dict[str, float] = {}
        for term in query_tokens:
            posting = self.postings.get(term)
            if not posting:
                continue
            idf = self.idf(term)
            for chunk_id, tf in posting:
                dl = self.doc_lengths[chunk_id]
                denom = tf + self.k1 * (1.0 - self.b + self.b * dl / self.avg_doc_length)
                part = idf * (tf * (self.k1 + 1.0)) / denom
                scores[chunk_id] = scores.get(chunk_id, 0.0) + part
        return scores


def build_bm25_index(chunks: Iterable[Chunk], k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    chunks = list(chunks)
    if not chunks:
        raise EmptyIndexInput("cannot build a BM25 index from zero chunks")
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_lengths: dict[str, int] = {}
    for chunk in chunks:
        tokens = tokenize(chunk.text)
        doc_lengths[chunk.chunk_id] = len(tokens)
        tf: dict[str, int] = {}
        for t in tokens:
            tf[t] = tf.get(t, 0) + 1
        for term, count in tf.items():
            postings.setdefault(term, []).append((chunk.chunk_id, count))
    # Integer sum, so avg is exact regardless of iteration order.
    avg = sum(doc_lengths.values()) / len(doc_lengths)
    return Bm25Index(
        postings=postings,
        doc_lengths=doc_lengths,
        avg_doc_length=avg,
        doc_count=len(doc_lengths),
        k1=k1,
        b=b,
    )


@dataclass
class VectorIndex:
    entries: dict[str, EmbeddingVector]
    dims: int

    def validate(self) -> None:
        for vec in self.entries.values():
            if vec.dims != self.dims:
                raise ValueError("inconsistent dims inside vector index")


def cosine(a: list[float], b: list[float]) -> float:
    """Plain left-to-right cosine; zero-norm vectors score 0.0."""
    dot = 0.0
    na = 0.0
    nb = 0.0
    for i in range(len(a)):
        dot += a[i] * b[i]
        na += a[i] * a[i]
        nb += b[i] * b[i]
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (math.sqrt(na) * math.sqrt(nb))


class IndexPair(NamedTuple):
    bm25: Bm25Index
    vectors: VectorIndex


@dataclass
class TypedIndexSet:
    """One (BM25, vector) index pair per filetype present in the corpus."""

    per_type: dict[FileType, IndexPair]
    chunk_lookup: dict[str, Chunk]
    chunk_types: dict[str, FileType]
    chunk_size: int
    overlap: int
    k1: float
    b: float
    dims: int
    _merged: IndexPair | None = field(default=None, repr=False, compare=False)

    def pair_for(self, file_type: FileType) -> IndexPair:
        pair = self.per_type.get(file_type)
        if pair is None:
            raise MissingIndex(file_type.value)
        return pair

    def merged_pair(self) -> IndexPair:
        """Single index pair spanning all filetypes (router-less operation)."""
        if self._merged is None:
            chunks = list(self.chunk_lookup.values())
            bm25 = build_bm25_index(chunks, k1=self.k1, b=self.b)
            entries: dict[str, EmbeddingVector] = {}
            for pair in self.per_type.values():
                entries.update(pair.vectors.entries)
            self._merged = IndexPair(bm25, VectorIndex(entries=entries, dims=self.dims))
        return self._merged


def build_typed_indices(
    corpus: CorpusStore,
    chunk_size: int,
    overlap: int,
    embedder,
    k1: float = 1.2,
    b: float = 0.75,
) -> TypedIndexSet:
    """Chunk and embed every file, then build one index pair per filetype."""
    if len(corpus) == 0:
        raise EmptyIndexInput("corpus is empty")
    chunks_by_type: dict[FileType, list[Chunk]] = {}
    chunk_lookup: dict[str, Chunk] = {}
    chunk_types: dict[str, FileType] = {}
    for f in corpus.files.values():
        if not f.text_repr:
            raise EmptyIndexInput(f"file {f.file_id} has an empty text_repr; enrich before indexing")
        for chunk in chunk_text(f.file_id, f.text_repr, chunk_size, overlap):
            chunks_by_type.setdefault(f.file_type, []).append(chunk)
            chunk_lookup[chunk.chunk_id] = chunk
            chunk_types[chunk.chunk_id] = f.file_type

    per_type: dict[FileType, IndexPair] = {}
    for file_type, chunks in chunks_by_type.items():
        bm25 = build_bm25_index(chunks, k1=k1, b=b)
        entries = {c.chunk_id: embed(c.text, embedder) for c in chunks}
        per_type[file_type] = IndexPair(bm25, VectorIndex(entries=entries, dims=embedder.dims))
    return TypedIndexSet(
        per_type=per_type,
        chunk_lookup=chunk_lookup,
        chunk_types=chunk_types,
        chunk_size=chunk_size,
        overlap=overlap,
        k1=k1,
        b=b,
        dims=embedder.dims,
    )


# --- persistence -----------------------------------------------------------
#
# Layout: <dir>/manifest.json plus, per filetype, <type>.postings.json and
# <type>.vectors.jsonl; chunks.jsonl holds the chunk lookup. Floats survive
# JSON round trips exactly (shortest-repr serialization), so a saved index
# returns bit-identical search results after loading.


def save_index_set(index_set: TypedIndexSet, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "version": INDEX_FORMAT_VERSION,
        "chunk_size": index_set.chunk_size,
        "overlap": index_set.overlap,
        "k1": index_set.k1,
        "b": index_set.b,
        "dims": index_set.dims,
        "types": [t.value for t in index_set.per_type],
        "counts": {t.value: pair.bm25.doc_count for t, pair in index_set.per_type.items()},
    }
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")

    with open(directory / "chunks.jsonl", "w", encoding="utf-8") as fh:
        for chunk in index_set.chunk_lookup.values():
            fh.write(
                json.dumps(
                    {
                        "chunk_id": chunk.chunk_id,
                        "file_id": chunk.file_id,
                        "ordinal": chunk.ordinal,
                        "text": chunk.text,
                        "token_count": chunk.token_count,
                        "file_type": index_set.chunk_types[chunk.chunk_id].value,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )

    for file_type, pair in index_set.per_type.items():
        postings_doc = {
            "postings": {term: posting for term, posting in pair.bm25.postings.items()},
            "doc_lengths": pair.bm25.doc_lengths,
            "avg_doc_length": pair.bm25.avg_doc_length,
            "doc_count": pair.bm25.doc_count,
            "k1": pair.bm25.k1,
            "b": pair.bm25.b,
        }
        (directory / f"{file_type.value}.postings.json").write_text(
            json.dumps(postings_doc, ensure_ascii=False), encoding="utf-8"
        )
        with open(directory / f"{file_type.value}.vectors.jsonl", "w", encoding="utf-8") as fh:
            for chunk_id, vec in pair.vectors.entries.items():
                fh.write(json.dumps({"chunk_id": chunk_id, "values": vec.values}) + "\n")


def load_index_set(directory: str | Path) -> TypedIndexSet:
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    if manifest.get("version") != INDEX_FORMAT_VERSION:
        raise UnknownIndexVersion(f"unsupported index format version {manifest.get('version')!r}")

    chunk_lookup: dict[str, Chunk] = {}
    chunk_types: dict[str, FileType] = {}
    with open(directory / "chunks.jsonl", encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            chunk = Chunk(
                chunk_id=obj["chunk_id"],
                file_id=obj["file_id"],
                ordinal=obj["ordinal"],
                text=obj["text"],
                token_count=obj["token_count"],
            )
            chunk_lookup[chunk.chunk_id] = chunk
            chunk_types[chunk.chunk_id] = FileType(obj["file_type"])

    per_type: dict[FileType, IndexPair] = {}
    for type_name in manifest["types"]:
        file_type = FileType(type_name)
        doc = json.loads((directory / f"{type_name}.postings.json").read_text(encoding="utf-8"))
        bm25 = Bm25Index(
            postings={term: [(cid, tf) for cid, tf in posting] for term, posting in doc["postings"].items()},
            doc_lengths=doc["doc_lengths"],
            avg_doc_length=doc["avg_doc_length"],
            doc_count=doc["doc_count"],
            k1=doc["k1"],
            b=doc["b"],
        )
        entries: dict[str, EmbeddingVector] = {}
        with open(directory / f"{type_name}.vectors.jsonl", encoding="utf-8") as fh:
            for line in fh:
                obj = json.loads(line)
                entries[obj["chunk_id"]] = EmbeddingVector(dims=manifest["dims"], values=obj["values"])
        per_type[file_type] = IndexPair(bm25, VectorIndex(entries=entries, dims=manifest["dims"]))

    return TypedIndexSet(
        per_type=per_type,
        chunk_lookup=chunk_lookup,
        chunk_types=chunk_types,
        chunk_size=manifest["chunk_size"],
        overlap=manifest["overlap"],
        k1=manifest["k1"],
        b=manifest["b"],
        dims=manifest["dims"],
    )

"""Smart search for multimodal digital archives.

Hybrid BM25/vector retrieval with per-filetype query routing, translation,
post-processing, LLM response synthesis that cites file IDs, and a
deterministic evaluation harness.
"""

__version__ = "0.1.0"

from .corpus import ArchiveFile, CorpusStore, FileType, load_corpus, save_corpus
from .errors import SmartSearchError
from .indexing import Chunk, EmbeddingVector, TypedIndexSet, build_typed_indices
from .pipeline import SearchPipeline
from .retrieval import RetrievalParams, ScoredNode, hybrid_retrieve
from .synthesis import SynthesizedResponse, extract_file_ids

__all__ = [
    "__version__",
    "ArchiveFile",
    "Chunk",
    "CorpusStore",
    "EmbeddingVector",
    "FileType",
    "RetrievalParams",
    "ScoredNode",
    "SearchPipeline",
    "SmartSearchError",
    "SynthesizedResponse",
    "TypedIndexSet",
    "build_typed_indices",
    "extract_file_ids",
    "hybrid_retrieve",
    "load_corpus",
    "save_corpus",
]

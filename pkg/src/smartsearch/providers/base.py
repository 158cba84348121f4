"""Provider interfaces and configuration.

All external intelligence (LLM completion, embeddings, translation, language
detection, reranking) sits behind these small protocols so that HTTP backends
and deterministic mocks are interchangeable without touching pipeline code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

from ..errors import ConfigError

PROVIDER_KINDS = ("llm", "embedding", "translation", "detection", "rerank")
BACKENDS = ("http", "mock")


@dataclass
class ProviderConfig:
    kind: str
    backend: str = "mock"
    endpoint: str | None = None
    auth_env_var: str | None = None
    model_id: str | None = None
    timeout_ms: int = 10_000
    max_retries: int = 2

    def validate(self) -> None:
        if self.kind not in PROVIDER_KINDS:
            raise ConfigError(f"providers.{self.kind}: unknown provider kind")
        if self.backend not in BACKENDS:
            raise ConfigError(f"providers.{self.kind}.backend: must be one of {BACKENDS}")
        if self.backend == "http" and not self.endpoint:
            raise ConfigError(f"providers.{self.kind}.endpoint: required for http backend")
        if self.timeout_ms <= 0:
            raise ConfigError(f"providers.{self.kind}.timeout_ms: must be > 0")
        if self.max_retries < 0:
            raise ConfigError(f"providers.{self.kind}.max_retries: must be >= 0")


@dataclass
class MockBehavior:
    """Knobs for the deterministic mock providers."""

    llm_mode: str = "citing_oracle"  # citing_oracle | echo | drop_half | fail
    embed_dims: int = 256
    seed: int = 0

    def validate(self) -> None:
        if self.llm_mode not in ("citing_oracle", "echo", "drop_half", "fail"):
            raise ConfigError(f"mock.llm_mode: unknown mode {self.llm_mode!r}")
        if self.embed_dims < 8:
            raise ConfigError("mock.embed_dims: must be >= 8")


@runtime_checkable
class LLMProvider(Protocol):
    def complete(self, prompt: str) -> str: ...


@runtime_checkable
class EmbeddingProvider(Protocol):
    dims: int

    def embed_values(self, text: str) -> list[float]: ...


@runtime_checkable
class TranslationProvider(Protocol):
    def translate(self, text: str, source: str, target: str) -> str: ...


@runtime_checkable
class DetectionProvider(Protocol):
    def detect(self, text: str) -> tuple[str, float]: ...


@runtime_checkable
class RerankProvider(Protocol):
    def rerank_scores(self, query: str, texts: Sequence[str]) -> list[float]: ...


@dataclass
class ProviderSet:
    """The five provider handles a pipeline needs, bundled."""

    llm: LLMProvider
    embedder: EmbeddingProvider
    translator: TranslationProvider
    detector: DetectionProvider
    reranker: RerankProvider

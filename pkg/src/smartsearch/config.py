"""Application configuration: file schema, validation, provider wiring.

Config is a single JSON document (see README for the schema). Secrets never
live in the file; HTTP providers read their API keys from environment
variables, and ``SMARTSEARCH_<KIND>_ENDPOINT`` / ``_MODEL`` / ``_API_KEY``
override the file per provider kind. Invalid configuration aborts startup
with a diagnostic naming the offending field.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .postprocess import PostProcessConfig
from .providers.base import PROVIDER_KINDS, MockBehavior, ProviderConfig, ProviderSet
from .providers.http import HttpDetector, HttpEmbedder, HttpLLM, HttpReranker, HttpTranslator
from .providers.mocks import MockDetector, MockEmbedder, MockLLM, MockReranker, MockTranslator
from .retrieval import RetrievalParams


@dataclass
class ChunkingConfig:
    chunk_size: int = 256
    overlap: int = 32


@dataclass
class Bm25Config:
    k1: float = 1.2
    b: float = 0.75


@dataclass
class AblationFlags:
    """True means the component is active; flipping one off mirrors the
    corresponding component-reduction variant of the evaluation harness."""

    translator: bool = True
    router: bool = True
    postprocessors: bool = True


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    ui_dir: str = "frontend/dist"
    url_template: str = "/files/{file_id}"


@dataclass
class AppConfig:
    corpus_path: str = "corpus.jsonl"
    index_dir: str = "index"
    topics: list[str] | None = None
    lax_corpus: bool = False
    chunking: ChunkingConfig = field(default_factory=ChunkingConfig)
    bm25: Bm25Config = field(default_factory=Bm25Config)
    retrieval: RetrievalParams = field(default_factory=RetrievalParams)
    postprocess: PostProcessConfig = field(default_factory=PostProcessConfig)
    ablation: AblationFlags = field(default_factory=AblationFlags)
    providers: dict[str, ProviderConfig] = field(default_factory=dict)
    mock: MockBehavior = field(default_factory=MockBehavior)
    synthesis_prompt_path: str | None = None
    server: ServerConfig = field(default_factory=ServerConfig)

    def __post_init__(self) -> None:
        for kind in PROVIDER_KINDS:
            self.providers.setdefault(kind, ProviderConfig(kind=kind))

    def validate(self) -> None:
        try:
            self.retrieval.validate()
        except ValueError as exc:
            raise ConfigError(f"retrieval: {exc}") from None
        try:
            self.postprocess.validate()
        except ValueError as exc:
            raise ConfigError(f"postprocess: {exc}") from None
        if self.chunking.chunk_size <= self.chunking.overlap or self.chunking.overlap < 0:
            raise ConfigError("chunking: need chunk_size > overlap >= 0")
        if self.bm25.k1 < 0 or not 0.0 <= self.bm25.b <= 1.0:
            raise ConfigError("bm25: need k1 >= 0 and b in [0, 1]")
        if not 1 <= self.server.port <= 65535:
            raise ConfigError("server.port: must be a valid TCP port")
        self.mock.validate()
        for kind, provider in self.providers.items():
            if provider.kind != kind:
                raise ConfigError(f"providers.{kind}: kind mismatch ({provider.kind})")
            provider.validate()

    def fingerprint(self) -> str:
        """Stable digest of everything that affects results (never timing)."""
        payload = json.dumps(_jsonable(self), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _jsonable(obj) -> object:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def config_to_dict(config: AppConfig) -> dict:
    return _jsonable(config)  # type: ignore[return-value]


_SECTION_TYPES = {
    "chunking": ChunkingConfig,
    "bm25": Bm25Config,
    "retrieval": RetrievalParams,
    "postprocess": PostProcessConfig,
    "ablation": AblationFlags,
    "mock": MockBehavior,
    "server": ServerConfig,
}

_SCALAR_KEYS = ("corpus_path", "index_dir", "topics", "lax_corpus", "synthesis_prompt_path")


def _build_section(cls, data: dict, section: str):
    fields = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - fields
    if unknown:
        raise ConfigError(f"{section}: unknown keys {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"{section}: {exc}") from None


def config_from_dict(data: dict) -> AppConfig:
    known = set(_SCALAR_KEYS) | set(_SECTION_TYPES) | {"providers"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")

    kwargs: dict = {k: data[k] for k in _SCALAR_KEYS if k in data}
    for section, cls in _SECTION_TYPES.items():
        if section in data:
            if not isinstance(data[section], dict):
                raise ConfigError(f"{section}: must be an object")
            kwargs[section] = _build_section(cls, data[section], section)

    providers: dict[str, ProviderConfig] = {}
    for kind, pdata in (data.get("providers") or {}).items():
        if kind not in PROVIDER_KINDS:
            raise ConfigError(f"providers.{kind}: unknown provider kind")
        if not isinstance(pdata, dict):
            raise ConfigError(f"providers.{kind}: must be an object")
        providers[kind] = _build_section(
            ProviderConfig, {"kind": kind, **pdata}, f"providers.{kind}"
        )
    kwargs["providers"] = providers

    config = AppConfig(**kwargs)
    config.validate()
    return config


def load_config(path: str | Path) -> AppConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ConfigError("config file: top level must be an object")
    return config_from_dict(data)


def apply_env_overrides(config: AppConfig) -> AppConfig:
    """Fold SMARTSEARCH_<KIND>_{ENDPOINT,MODEL,API_KEY} into provider configs."""
    for kind, provider in config.providers.items():
        prefix = f"SMARTSEARCH_{kind.upper()}"
        endpoint = os.environ.get(f"{prefix}_ENDPOINT")
        if endpoint:
            provider.endpoint = endpoint
        model = os.environ.get(f"{prefix}_MODEL")
        if model:
            provider.model_id = model
        if provider.auth_env_var is None and os.environ.get(f"{prefix}_API_KEY"):
            provider.auth_env_var = f"{prefix}_API_KEY"
    return config


def build_providers(config: AppConfig) -> ProviderSet:
    """Instantiate the five provider handles per the configured backends."""
    mock = config.mock

    def pick(kind: str, mock_factory, http_factory):
        provider_cfg = config.providers[kind]
        if provider_cfg.backend == "mock":
            return mock_factory()
        return http_factory(provider_cfg)

    return ProviderSet(
        llm=pick("llm", lambda: MockLLM(mode=mock.llm_mode), HttpLLM),
        embedder=pick(
            "embedding",
            lambda: MockEmbedder(dims=mock.embed_dims, seed=mock.seed),
            lambda cfg: HttpEmbedder(cfg, dims=mock.embed_dims),
        ),
        translator=pick("translation", MockTranslator, HttpTranslator),
        detector=pick("detection", MockDetector, HttpDetector),
        reranker=pick("rerank", MockReranker, HttpReranker),
    )

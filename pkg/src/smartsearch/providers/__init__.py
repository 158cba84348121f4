from .base import (
    BACKENDS,
    PROVIDER_KINDS,
    DetectionProvider,
    EmbeddingProvider,
    LLMProvider,
    MockBehavior,
    ProviderConfig,
    ProviderSet,
    RerankProvider,
    TranslationProvider,
)
from .http import HttpDetector, HttpEmbedder, HttpLLM, HttpReranker, HttpTranslator
from .mocks import (
    EN_TO_KO,
    KO_TO_EN,
    MockDetector,
    MockEmbedder,
    MockLLM,
    MockReranker,
    MockTranslator,
)

__all__ = [
    "BACKENDS",
    "PROVIDER_KINDS",
    "DetectionProvider",
    "EmbeddingProvider",
    "LLMProvider",
    "MockBehavior",
    "ProviderConfig",
    "ProviderSet",
    "RerankProvider",
    "TranslationProvider",
    "HttpDetector",
    "HttpEmbedder",
    "HttpLLM",
    "HttpReranker",
    "HttpTranslator",
    "EN_TO_KO",
    "KO_TO_EN",
    "MockDetector",
    "MockEmbedder",
    "MockLLM",
    "MockReranker",
    "MockTranslator",
]

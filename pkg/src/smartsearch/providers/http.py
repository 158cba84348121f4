"""HTTP-backed provider implementations.

One generic chat-completion wire shape (messages array, temperature 0) covers
any compatible LLM gateway; model differences are configuration. All calls
retry with exponential backoff and surface ``ProviderError`` on timeout, bad
status, or a malformed body. A call never blocks longer than
``timeout * (max_retries + 1)`` plus backoff sleeps.

Request/response shapes (JSON bodies):

* llm:         POST {model, messages:[{role,content}], temperature:0}
               -> {choices:[{message:{content}}]}
* embedding:   POST {model, input} -> {data:[{embedding:[...]}]}
* translation: POST {text, source, target} -> {translation}
* detection:   POST {text} -> {language, confidence}
* rerank:      POST {query, texts:[...]} -> {scores:[...]}
"""

from __future__ import annotations

import os
import time
from typing import Sequence

import requests

from ..errors import ProviderError
from .base import ProviderConfig

_BACKOFF_BASE_S = 0.1


class _HttpProvider:
    def __init__(self, cfg: ProviderConfig):
        cfg.validate()
        self.cfg = cfg
        self._session = requests.Session()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.cfg.auth_env_var:
            token = os.environ.get(self.cfg.auth_env_var)
            if token:
                headers["Authorization"] = f"Bearer {token}"
        return headers

    def _post(self, payload: dict) -> dict:
        timeout_s = self.cfg.timeout_ms / 1000.0
        last_error = "unknown"
        for attempt in range(self.cfg.max_retries + 1):
            if attempt:
                time.sleep(_BACKOFF_BASE_S * (2 ** (attempt - 1)))
            try:
                resp = self._session.post(
                    self.cfg.endpoint, json=payload, headers=self._headers(), timeout=timeout_s
                )
            except requests.Timeout:
                last_error = "timeout"
                continue
            except requests.RequestException as exc:
                last_error = f"transport: {exc}"
                continue
            if resp.status_code != 200:
                last_error = f"status {resp.status_code}"
                continue
            try:
                return resp.json()
            except ValueError:
                last_error = "malformed: body is not JSON"
                continue
        raise ProviderError(f"{self.cfg.kind} provider failed after {self.cfg.max_retries + 1} attempts ({last_error})")


class HttpLLM(_HttpProvider):
    def complete(self, prompt: str) -> str:
        body = self._post(
            {
                "model": self.cfg.model_id,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": 0,
            }
        )
        try:
            text = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ProviderError("malformed: missing choices[0].message.content") from None
        if not isinstance(text, str):
            raise ProviderError("malformed: completion content is not a string")
        return text


class HttpEmbedder(_HttpProvider):
    def __init__(self, cfg: ProviderConfig, dims: int):
        super().__init__(cfg)
        self.dims = dims

    def embed_values(self, text: str) -> list[float]:
        if not text:
            raise ProviderError("empty input")
        body = self._post({"model": self.cfg.model_id, "input": text})
        try:
            values = body["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError):
            raise ProviderError("malformed: missing data[0].embedding") from None
        if not isinstance(values, list) or len(values) != self.dims:
            raise ProviderError(f"malformed: expected {self.dims}-dim embedding")
        return [float(v) for v in values]


class HttpTranslator(_HttpProvider):
    def translate(self, text: str, source: str, target: str) -> str:
        body = self._post({"text": text, "source": source, "target": target})
        translation = body.get("translation")
        if not isinstance(translation, str):
            raise ProviderError("malformed: missing translation")
        return translation


class HttpDetector(_HttpProvider):
    def detect(self, text: str) -> tuple[str, float]:
        body = self._post({"text": text})
        language = body.get("language")
        confidence = body.get("confidence")
        if not isinstance(language, str) or not isinstance(confidence, (int, float)):
            raise ProviderError("malformed: missing language/confidence")
        return (language, float(confidence))


class HttpReranker(_HttpProvider):
    def rerank_scores(self, query: str, texts: Sequence[str]) -> list[float]:
        body = self._post({"query": query, "texts": list(texts)})
        scores = body.get("scores")
        if not isinstance(scores, list) or len(scores) != len(texts):
            raise ProviderError("malformed: scores must align with texts")
        return [float(s) for s in scores]

"""Deterministic provider mocks for hermetic, reproducible runs.

Every mock is a pure function of its inputs and the configured seed: two runs
produce bit-identical outputs. They stand in for the production backends with
just enough behavior to exercise the pipeline:

* ``MockLLM`` parses the file blocks out of a synthesis prompt and cites them
  back (``citing_oracle``), cites only the odd-ranked ones (``drop_half``),
  echoes the prompt (``echo``), or fails (``fail``). The citing modes also
  answer engine-selector prompts by scanning the query line for English
  filetype keywords, like the English-tuned model they stand in for; a query
  they cannot read yields an unparseable refusal, pushing the router onto its
  deterministic fallback.
* ``MockEmbedder`` is a seeded hashed bag-of-words. Tokens are first folded
  through the built-in Korean-English lexicon, mimicking a multilingual
  embedding model: the Korean surface form of a covered word lands in the
  same bucket as its English counterpart.
* ``MockTranslator`` applies a fixed bilingual word lexicon covering the
  benchmark templates and topics, so translation is lossless on that closed
  vocabulary.
* ``MockDetector`` classifies by Hangul script and an English stopword
  profile.
* ``MockReranker`` scores surface-level query term overlap, like the
  English-only cross encoder it replaces.
"""

from __future__ import annotations

import hashlib
import re
from typing import Sequence

from ..corpus import DESCRIBE_PREFIX
from ..errors import ProviderError
from ..indexing import tokenize
from ..routing import SELECTOR_PREFIX, scan_filetype_keywords

# English -> Korean word lexicon: query/response template vocabulary plus the
# default topic set. Values are unique so the reverse direction is lossless.
EN_TO_KO: dict[str, str] = {
    # query templates
    "recommend": "추천해줘",
    "retrieve": "가져와줘",
    "give": "주세요",
    "me": "나에게",
    "some": "몇몇",
    "files": "파일을",
    "file": "파일",
    "about": "관한",
    "or": "또는",
    "image": "이미지",
    "audio": "오디오",
    "video": "비디오",
    "document": "문서",
    # default topics
    "wildlife": "야생동물",
    "landscapes": "풍경",
    "celebrities": "유명인",
    "political": "정치",
    "events": "행사",
    "architecture": "건축",
    "space": "우주",
    "exploration": "탐사",
    "street": "거리",
    "food": "음식",
    "folk": "민속",
    "music": "음악",
    "marine": "해양",
    "biology": "생물학",
    "ancient": "고대",
    "history": "역사",
    # response templates
    "recommended": "추천",
    "no": "없음",
    "matching": "일치하는",
    "found": "발견됨",
    "for": "대한",
    "this": "이",
    "query": "질의",
}

KO_TO_EN: dict[str, str] = {v: k for k, v in EN_TO_KO.items()}
assert len(KO_TO_EN) == len(EN_TO_KO), "bilingual lexicon must be invertible"

# File block header rendered by the synthesis prompt; the citing mocks parse it.
FILE_BLOCK_RE = re.compile(
    r"\[file_id:\s*(\d+)\]\s*\((image|audio|video|document)\)\s*\"([^\"\n]*)\""
)

_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)

_HANGUL_RE = re.compile(r"[ᄀ-ᇿ㄰-㆏가-힣]")

_EN_PROFILE = frozenset(
    {"recommend", "retrieve", "give", "me", "some", "files", "file", "about",
     "or", "the", "a", "an", "of", "to", "and", "any", "show", "find", "what"}
)


class MockLLM:
    """Scripted chat-completion stand-in. See module docstring for modes."""

    def __init__(self, mode: str = "citing_oracle"):
        if mode not in ("citing_oracle", "echo", "drop_half", "fail"):
            raise ValueError(f"unknown mock llm mode {mode!r}")
        self.mode = mode

    def complete(self, prompt: str) -> str:
        if self.mode == "fail":
            raise ProviderError("mock llm configured to fail")
        if self.mode == "echo":
            return prompt
        if prompt.startswith(DESCRIBE_PREFIX):
            return "Auto-generated description: " + prompt[len(DESCRIBE_PREFIX):].strip()
        if prompt.startswith(SELECTOR_PREFIX):
            return self._select_engines(prompt)
        files: list[tuple[str, str, str]] = []
        seen: set[str] = set()
        for m in FILE_BLOCK_RE.finditer(prompt):
            fid = m.group(1)
            if fid not in seen:
                seen.add(fid)
                files.append((fid, m.group(2), m.group(3)))
        if not files:
            return "No files were provided."
        if self.mode == "drop_half":
            files = files[0::2]
        return " ".join(f"Recommended: {title} [file_id: {fid}]." for fid, _ftype, title in files)

    @staticmethod
    def _select_engines(prompt: str) -> str:
        query_lines = [l for l in prompt.splitlines() if l.startswith("Query:")]
        matched = scan_filetype_keywords(query_lines[-1]) if query_lines else ()
        if not matched:
            return "I could not determine the engines for this query."
        return "[" + ", ".join(f'"{ft.value}"' for ft in matched) + "]"


class MockEmbedder:
    """Seeded hashed bag-of-words embedder, L2-normalized.

    tokenize -> fold tokens through the Korean-English lexicon -> hash each
    term into one of ``dims`` buckets -> accumulate term frequency ->
    normalize. Deterministic for a fixed seed.
    """

    def __init__(self, dims: int = 256, seed: int = 0):
        if dims < 8:
            raise ValueError("dims must be >= 8")
        self.dims = dims
        self.seed = seed
        self._key = f"bow-{seed}".encode("utf-8")

    def _bucket(self, term: str) -> int:
        digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "big") % self.dims

    def embed_values(self, text: str) -> list[float]:
        tokens = tokenize(text)
        if not tokens:
            raise ProviderError("empty input")
        values = [0.0] * self.dims
        for token in tokens:
            values[self._bucket(KO_TO_EN.get(token, token))] += 1.0
        norm_sq = 0.0
        for v in values:
            norm_sq += v * v
        norm = norm_sq ** 0.5
        return [v / norm for v in values]


class MockTranslator:
    """Word-by-word lexicon translation between English and Korean.

    Words outside the lexicon (titles, filler prose, placeholders) pass
    through untouched; punctuation and digits are preserved in place.
    """

    def translate(self, text: str, source: str, target: str) -> str:
        if source == target:
            return text
        if (source, target) == ("en", "ko"):
            mapping = EN_TO_KO
        elif (source, target) == ("ko", "en"):
            mapping = KO_TO_EN
        else:
            return text

        def repl(match: re.Match) -> str:
            word = match.group(0)
            return mapping.get(word.lower(), word)

        return _WORD_RE.sub(repl, text)


class MockDetector:
    """Hangul-script plus English stopword-profile classifier over {en, ko}."""

    def detect(self, text: str) -> tuple[str, float]:
        if _HANGUL_RE.search(text):
            return ("ko", 0.99)
        hits = sum(1 for t in tokenize(text) if t in _EN_PROFILE)
        if hits >= 2:
            return ("en", 0.95)
        if hits == 1:
            return ("en", 0.7)
        return ("en", 0.4)


class MockReranker:
    """Normalized query-term overlap in [0, 1]; surface tokens only."""

    def rerank_scores(self, query: str, texts: Sequence[str]) -> list[float]:
        query_terms = set(tokenize(query))
        if not query_terms:
            return [0.0 for _ in texts]
        return [
            len(query_terms & set(tokenize(text))) / len(query_terms)
            for text in texts
        ]

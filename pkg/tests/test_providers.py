import json
import threading
import time
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from smartsearch.errors import ProviderError
from smartsearch.providers.base import MockBehavior, ProviderConfig
from smartsearch.providers.http import (
    HttpDetector,
    HttpEmbedder,
    HttpLLM,
    HttpReranker,
    HttpTranslator,
)
from smartsearch.providers.mocks import (
    EN_TO_KO,
    KO_TO_EN,
    MockDetector,
    MockEmbedder,
    MockLLM,
    MockReranker,
    MockTranslator,
)

FILE_BLOCKS = (
    '[file_id: 111] (image) "First plate"\nwildlife photograph\n\n'
    '[file_id: 222] (audio) "Second session"\nwildlife broadcast\n\n'
    '[file_id: 333] (video) "Third reel"\nwildlife reel\n\n'
    '[file_id: 444] (document) "Fourth brief"\nwildlife manuscript'
)


# --- mock LLM -----------------------------------------------------------------

def test_citing_oracle_cites_distinct_files_in_order():
    out = MockLLM("citing_oracle").complete(f"Query: q\n\n{FILE_BLOCKS}\n\ncite please")
    assert out == (
        "Recommended: First plate [file_id: 111]. "
        "Recommended: Second session [file_id: 222]. "
        "Recommended: Third reel [file_id: 333]. "
        "Recommended: Fourth brief [file_id: 444]."
    )


def test_citing_oracle_deduplicates_repeated_files():
    prompt = '[file_id: 111] (image) "A"\nx\n\n[file_id: 111] (image) "A"\ny'
    out = MockLLM("citing_oracle").complete(prompt)
    assert out.count("[file_id: 111]") == 1


def test_drop_half_cites_odd_ranked_files():
    out = MockLLM("drop_half").complete(FILE_BLOCKS)
    assert "[file_id: 111]" in out and "[file_id: 333]" in out
    assert "[file_id: 222]" not in out and "[file_id: 444]" not in out


def test_echo_mode_returns_prompt():
    assert MockLLM("echo").complete("anything at all") == "anything at all"


def test_fail_mode_raises():
    with pytest.raises(ProviderError):
        MockLLM("fail").complete("x")


def test_mock_llm_determinism():
    prompt = FILE_BLOCKS
    assert MockLLM("citing_oracle").complete(prompt) == MockLLM("citing_oracle").complete(prompt)


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        MockLLM("surprise")


# --- mock embedder --------------------------------------------------------------

def test_embedder_bit_identical_across_instances():
    a = MockEmbedder(dims=64, seed=3).embed_values("coastal heritage survey")
    b = MockEmbedder(dims=64, seed=3).embed_values("coastal heritage survey")
    assert a == b


def test_embedder_seed_changes_buckets():
    a = MockEmbedder(dims=64, seed=3).embed_values("coastal")
    b = MockEmbedder(dims=64, seed=4).embed_values("coastal")
    assert a != b


def test_embedder_folds_korean_lexicon():
    e = MockEmbedder(dims=128, seed=0)
    assert e.embed_values("이미지") == e.embed_values("image")
    assert e.embed_values("야생동물 이미지") == e.embed_values("wildlife image")


def test_embedder_rejects_empty():
    with pytest.raises(ProviderError):
        MockEmbedder().embed_values("")


def test_embedder_minimum_dims():
    with pytest.raises(ValueError):
        MockEmbedder(dims=4)
    MockBehavior(embed_dims=8).validate()


# --- mock translator / detector / reranker ---------------------------------------

def test_translate_identity_when_same_language():
    t = MockTranslator()
    assert t.translate("Recommend some image files", "en", "en") == "Recommend some image files"


def test_translate_round_trips_template_vocabulary():
    t = MockTranslator()
    for text in [
        "Recommend some image files about wildlife",
        "Retrieve some audio or video files about ancient history",
        "Give me some files about marine biology",
    ]:
        ko = t.translate(text, "en", "ko")
        assert ko != text
        assert t.translate(ko, "ko", "en") == text.lower()


def test_translate_preserves_punctuation_digits_and_unknown_words():
    t = MockTranslator()
    out = t.translate("Recommended: Zanzibar, 42!", "en", "ko")
    assert out == "추천: Zanzibar, 42!"


def test_translate_mangles_raw_markers_hence_masking():
    # raw citation markers are NOT provider-safe; the language stage masks
    # them before translating and restores them afterwards
    out = MockTranslator().translate("[file_id: 42]", "en", "ko")
    assert out != "[file_id: 42]"


def test_lexicon_is_invertible():
    assert len(KO_TO_EN) == len(EN_TO_KO)


def test_detector_profiles():
    d = MockDetector()
    assert d.detect("Give me some files about wildlife") == ("en", 0.95)
    assert d.detect("이미지 파일")[0] == "ko"
    code, conf = d.detect("zebra quartz")
    assert code == "en" and conf < 0.5


def test_reranker_overlap_scores():
    r = MockReranker()
    scores = r.rerank_scores("wildlife photo", ["wildlife photo of lions", "annual budget report"])
    assert scores == [1.0, 0.0]
    assert r.rerank_scores("alpha beta", ["alpha x", "beta alpha"]) == [0.5, 1.0]
    assert r.rerank_scores("", ["anything"]) == [0.0]


# --- http backends ----------------------------------------------------------------

class StubHandler(BaseHTTPRequestHandler):
    behaviors = {}

    def do_POST(self):  # noqa: N802
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        behavior = self.behaviors.get(self.path, {"status": 200, "body": {}})
        if callable(behavior):
            behavior = behavior(body)
        if behavior.get("sleep"):
            time.sleep(behavior["sleep"])
        self.send_response(behavior["status"])
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        payload = behavior["body"]
        self.wfile.write(json.dumps(payload).encode())

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def cfg(kind, endpoint, timeout_ms=2000, max_retries=1):
    return ProviderConfig(kind=kind, backend="http", endpoint=endpoint, timeout_ms=timeout_ms, max_retries=max_retries)


def test_http_llm_success(stub_server):
    StubHandler.behaviors["/llm"] = {
        "status": 200,
        "body": {"choices": [{"message": {"content": "hello there"}}]},
    }
    llm = HttpLLM(cfg("llm", f"{stub_server}/llm"))
    assert llm.complete("hi") == "hello there"


def test_http_llm_retries_then_succeeds(stub_server):
    calls = {"n": 0}

    def flaky(body):
        calls["n"] += 1
        if calls["n"] == 1:
            return {"status": 500, "body": {}}
        return {"status": 200, "body": {"choices": [{"message": {"content": "ok"}}]}}

    StubHandler.behaviors["/flaky"] = flaky
    llm = HttpLLM(cfg("llm", f"{stub_server}/flaky", max_retries=2))
    assert llm.complete("hi") == "ok"
    assert calls["n"] == 2


def test_http_llm_exhausts_retries(stub_server):
    StubHandler.behaviors["/down"] = {"status": 503, "body": {}}
    llm = HttpLLM(cfg("llm", f"{stub_server}/down", max_retries=1))
    with pytest.raises(ProviderError, match="status 503"):
        llm.complete("hi")


def test_http_llm_malformed_body(stub_server):
    StubHandler.behaviors["/weird"] = {"status": 200, "body": {"unexpected": True}}
    llm = HttpLLM(cfg("llm", f"{stub_server}/weird"))
    with pytest.raises(ProviderError, match="malformed"):
        llm.complete("hi")


def test_http_timeout_is_bounded(stub_server):
    StubHandler.behaviors["/slow"] = {"status": 200, "body": {}, "sleep": 2.0}
    llm = HttpLLM(cfg("llm", f"{stub_server}/slow", timeout_ms=200, max_retries=1))
    started = time.perf_counter()
    with pytest.raises(ProviderError, match="timeout"):
        llm.complete("hi")
    elapsed = time.perf_counter() - started
    # two attempts, 200ms each, plus one 100ms backoff and slack
    assert elapsed < 2.0


def test_http_embedder(stub_server):
    StubHandler.behaviors["/embed"] = {"status": 200, "body": {"data": [{"embedding": [0.1] * 8}]}}
    embedder = HttpEmbedder(cfg("embedding", f"{stub_server}/embed"), dims=8)
    assert embedder.embed_values("x") == [0.1] * 8
    StubHandler.behaviors["/embed"] = {"status": 200, "body": {"data": [{"embedding": [0.1] * 4}]}}
    with pytest.raises(ProviderError, match="8-dim"):
        embedder.embed_values("x")


def test_http_translator_detector_reranker(stub_server):
    StubHandler.behaviors["/tr"] = {"status": 200, "body": {"translation": "hola"}}
    assert HttpTranslator(cfg("translation", f"{stub_server}/tr")).translate("hello", "en", "es") == "hola"
    StubHandler.behaviors["/dt"] = {"status": 200, "body": {"language": "ko", "confidence": 0.93}}
    assert HttpDetector(cfg("detection", f"{stub_server}/dt")).detect("x") == ("ko", 0.93)
    StubHandler.behaviors["/rr"] = {"status": 200, "body": {"scores": [0.2, 0.8]}}
    assert HttpReranker(cfg("rerank", f"{stub_server}/rr")).rerank_scores("q", ["a", "b"]) == [0.2, 0.8]
    StubHandler.behaviors["/rr"] = {"status": 200, "body": {"scores": [0.2]}}
    with pytest.raises(ProviderError, match="align"):
        HttpReranker(cfg("rerank", f"{stub_server}/rr")).rerank_scores("q", ["a", "b"])


def test_provider_config_validation():
    with pytest.raises(Exception):
        ProviderConfig(kind="llm", backend="http", endpoint=None).validate()
    with pytest.raises(Exception):
        ProviderConfig(kind="llm", backend="carrier-pigeon").validate()
    with pytest.raises(Exception):
        ProviderConfig(kind="llm", timeout_ms=0).validate()

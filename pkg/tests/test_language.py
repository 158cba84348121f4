import pytest

from smartsearch.errors import ProviderError
from smartsearch.language import (
    LanguageTag,
    detect_language,
    from_english,
    mask_markers,
    to_english,
    unmask_markers,
)
from smartsearch.providers.mocks import MockDetector, MockTranslator


class FailingProvider:
    def detect(self, text):
        raise ProviderError("detection service down")

    def translate(self, text, source, target):
        raise ProviderError("translation service down")


class LowConfidenceDetector:
    def detect(self, text):
        return ("fr", 0.3)


def test_detect_english_template():
    tag, note = detect_language("Recommend some image files about wildlife", MockDetector())
    assert (tag.code, note) == ("en", None)
    assert tag.confidence >= 0.9


def test_detect_korean_hangul():
    tag, note = detect_language("이미지 파일을 추천해줘", MockDetector())
    assert (tag.code, note) == ("ko", None)
    assert tag.confidence >= 0.9


def test_low_confidence_defaults_to_english_with_note():
    tag, note = detect_language("xyzzy", LowConfidenceDetector())
    assert tag.code == "en"
    assert tag.confidence == 0.3
    assert "threshold" in note


def test_detector_failure_defaults_to_english():
    tag, note = detect_language("whatever", FailingProvider())
    assert (tag.code, tag.confidence) == ("en", 0.0)
    assert "defaulting to en" in note


def test_to_english_bypasses_english_input():
    tag = LanguageTag("en", 0.95)
    out = to_english("Give me some files about wildlife", tag, MockTranslator())
    assert out.bypassed and not out.degraded
    assert out.english == out.original == "Give me some files about wildlife"


def test_to_english_uses_lexicon_for_korean():
    tag = LanguageTag("ko", 0.99)
    out = to_english("추천해줘 몇몇 이미지 파일을 관한 야생동물", tag, MockTranslator())
    assert not out.bypassed
    assert out.english == "recommend some image files about wildlife"


def test_to_english_provider_failure_passes_original_through():
    tag = LanguageTag("ko", 0.99)
    out = to_english("이미지 파일", tag, FailingProvider())
    assert out.english == "이미지 파일"
    assert out.degraded and not out.bypassed


def test_from_english_identity_for_english_target():
    text, degraded = from_english("Recommended: X [file_id: 42].", LanguageTag("en", 1.0), MockTranslator())
    assert text == "Recommended: X [file_id: 42]."
    assert not degraded


def test_from_english_preserves_markers_through_translation():
    source = "Recommended: Wildlife Plate 01 [file_id: 5138120512]. No matching files found for this query."
    text, degraded = from_english(source, LanguageTag("ko", 0.99), MockTranslator())
    assert not degraded
    assert "[file_id: 5138120512]" in text
    assert "추천" in text  # response vocabulary actually translated


def test_from_english_provider_failure_returns_english():
    text, degraded = from_english("Recommended: X [file_id: 42].", LanguageTag("ko", 0.99), FailingProvider())
    assert text == "Recommended: X [file_id: 42]."
    assert degraded


def test_mask_and_unmask_round_trip():
    text = "a [file_id: 1] b [file_id: 22] c"
    masked, markers = mask_markers(text)
    assert markers == ["[file_id: 1]", "[file_id: 22]"]
    assert "[file_id:" not in masked
    assert unmask_markers(masked, markers) == text


def test_unmask_restores_dropped_markers_at_end():
    masked, markers = mask_markers("x [file_id: 7] y")
    mangled = masked.replace("FIDTOKEN0", "")  # a hostile translator ate the placeholder
    restored = unmask_markers(mangled, markers)
    assert "[file_id: 7]" in restored


def test_language_tag_validation():
    with pytest.raises(ValueError):
        LanguageTag("EN", 0.9).validate()
    with pytest.raises(ValueError):
        LanguageTag("en", 1.5).validate()

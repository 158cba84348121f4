"""Query/response translation with graceful degradation.

Nothing in this module ever raises past its boundary: every provider failure
downgrades to pass-through behavior plus a trace note, because a broken
translator must degrade search quality, not availability. File-ID citation
markers are masked with opaque placeholders before response translation and
restored afterwards, so cited IDs survive any translation backend verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ProviderError

DETECTION_CONFIDENCE_THRESHOLD = 0.5

_MARKER_RE = re.compile(r"\[file_id:\s*\d+\]")
_PLACEHOLDER = "FIDTOKEN{n}"
_PLACEHOLDER_RE = re.compile(r"FIDTOKEN(\d+)")


@dataclass
class LanguageTag:
    code: str  # ISO-639-1, two lowercase letters
    confidence: float

    def validate(self) -> None:
        if len(self.code) != 2 or not self.code.islower():
            raise ValueError(f"bad language code {self.code!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0, 1]")


@dataclass
class TranslatedQuery:
    original: str
    original_lang: LanguageTag
    english: str
    bypassed: bool
    degraded: bool = False


def detect_language(text: str, detector) -> tuple[LanguageTag, str | None]:
    """Detect the query language; defaults to English rather than failing.

    Returns the tag and an optional trace note explaining a default.
    """
    try:
        code, confidence = detector.detect(text)
    except ProviderError as exc:
        return LanguageTag("en", 0.0), f"detection failed ({exc}); defaulting to en"
    if confidence < DETECTION_CONFIDENCE_THRESHOLD:
        return (
            LanguageTag("en", confidence),
            f"detection confidence {confidence:.2f} below threshold; defaulting to en",
        )
    tag = LanguageTag(code, confidence)
    tag.validate()
    return tag, None


def to_english(text: str, lang: LanguageTag, translator) -> TranslatedQuery:
    """English input is bypassed unchanged; failures pass the original through."""
    if lang.code == "en":
        return TranslatedQuery(original=text, original_lang=lang, english=text, bypassed=True)
    try:
        english = translator.translate(text, source=lang.code, target="en")
    except ProviderError:
        return TranslatedQuery(
            original=text, original_lang=lang, english=text, bypassed=False, degraded=True
        )
    return TranslatedQuery(original=text, original_lang=lang, english=english, bypassed=False)


def mask_markers(text: str) -> tuple[str, list[str]]:
    markers: list[str] = []

    def repl(match: re.Match) -> str:
        markers.append(match.group(0))
        return _PLACEHOLDER.format(n=len(markers) - 1)

    return _MARKER_RE.sub(repl, text), markers


def unmask_markers(text: str, markers: list[str]) -> str:
    restored_idx: set[int] = set()

    def repl(match: re.Match) -> str:
        idx = int(match.group(1))
        if idx >= len(markers):
            return match.group(0)
        restored_idx.add(idx)
        return markers[idx]

    restored = _PLACEHOLDER_RE.sub(repl, text)
    # A provider that drops placeholders must not lose citations.
    lost = [m for i, m in enumerate(markers) if i not in restored_idx]
    if lost:
        restored = restored.rstrip() + " " + " ".join(lost)
    return restored


def from_english(response_text: str, target: LanguageTag, translator) -> tuple[str, bool]:
    """Translate the response back; citation markers are preserved verbatim.

    Returns (text, degraded). English targets are returned unchanged; on
    provider failure the English text is returned with the degraded flag.
    """
    if target.code == "en":
        return response_text, False
    masked, markers = mask_markers(response_text)
    try:
        translated = translator.translate(masked, source="en", target=target.code)
    except ProviderError:
        return response_text, True
    return unmask_markers(translated, markers), False

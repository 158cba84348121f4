"""Archive corpus: loading, validation, enrichment, serialization.

Every record describes one archive file. Non-textual media never enter the
system; each record carries a uniform textual representation (``text_repr``)
which is what gets chunked and indexed downstream. Records live in a UTF-8
line-delimited JSON file, one object per line.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import DuplicateFileId, MalformedRecord, ProviderError, UnknownFileType


class FileType(str, Enum):
    IMAGE = "image"
    AUDIO = "audio"
    VIDEO = "video"
    DOCUMENT = "document"


#: Fixed engine/report ordering used everywhere a per-type sequence is needed.
ENGINE_ORDER: tuple[FileType, ...] = (
    FileType.IMAGE,
    FileType.AUDIO,
    FileType.VIDEO,
    FileType.DOCUMENT,
)

_REQUIRED_KEYS = ("file_id", "file_type", "topic", "title")
_OPTIONAL_KEYS = ("text_repr", "metadata_physical", "metadata_custom", "metadata_ai")


@dataclass
class ArchiveFile:
    """One archive record and its three metadata families.

    ``metadata_physical`` holds technical attributes (format, size in bytes,
    ISO-8601 creation date), ``metadata_custom`` user-supplied annotations,
    and ``metadata_ai`` model-generated descriptions or transcripts.
    """

    file_id: str
    file_type: FileType
    topic: str
    title: str
    text_repr: str = ""
    metadata_physical: dict[str, str] = field(default_factory=dict)
    metadata_custom: dict[str, str] = field(default_factory=dict)
    metadata_ai: dict[str, str] = field(default_factory=dict)
    extras: dict[str, object] = field(default_factory=dict)  # lax-mode passthrough

    def validate(self) -> None:
        if not self.file_id or not self.file_id.isdigit():
            raise ValueError(f"file_id must be a non-empty digit string, got {self.file_id!r}")
        if not isinstance(self.file_type, FileType):
            raise UnknownFileType(str(self.file_type))
        if not self.topic:
            raise ValueError("topic must be non-empty")

    def to_record(self) -> dict:
        rec: dict[str, object] = {
            "file_id": self.file_id,
            "file_type": self.file_type.value,
            "topic": self.topic,
            "title": self.title,
        }
        if self.text_repr:
            rec["text_repr"] = self.text_repr
        if self.metadata_physical:
            rec["metadata_physical"] = self.metadata_physical
        if self.metadata_custom:
            rec["metadata_custom"] = self.metadata_custom
        if self.metadata_ai:
            rec["metadata_ai"] = self.metadata_ai
        rec.update(self.extras)
        return rec


@dataclass
class CorpusStore:
    """Immutable-after-load container for the whole corpus.

    Safe for concurrent reads; never mutated by query workers.
    """

    files: dict[str, ArchiveFile]
    topics: list[str]
    per_type_counts: dict[FileType, int]

    def __len__(self) -> int:
        return len(self.files)

    def by_type(self, file_type: FileType) -> list[ArchiveFile]:
        return [f for f in self.files.values() if f.file_type == file_type]

    def check_invariants(self) -> None:
        assert sum(self.per_type_counts.values()) == len(self.files)
        for f in self.files.values():
            assert f.topic in self.topics, f"topic {f.topic!r} missing from topic set"


def _parse_string_map(value: object, line_no: int, key: str) -> dict[str, str]:
    if not isinstance(value, dict):
        raise MalformedRecord(line_no, f"{key} must be an object")
    out = {}
    for k, v in value.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise MalformedRecord(line_no, f"{key} must map strings to strings")
        out[k] = v
    return out


def parse_record(obj: dict, line_no: int = 0, lax: bool = False) -> ArchiveFile:
    """Build an ArchiveFile from one decoded JSON object.

    Strict mode (the default) rejects unknown keys; lax mode preserves them
    in ``extras`` so they survive a round trip.
    """
    for key in _REQUIRED_KEYS:
        if key not in obj:
            raise MalformedRecord(line_no, f"missing required key {key!r}")
        if not isinstance(obj[key], str):
            raise MalformedRecord(line_no, f"key {key!r} must be a string")

    unknown = [k for k in obj if k not in _REQUIRED_KEYS and k not in _OPTIONAL_KEYS]
    if unknown and not lax:
        raise MalformedRecord(line_no, f"unknown keys {sorted(unknown)} (use lax mode to keep them)")

    file_id = obj["file_id"]
    if not file_id or not file_id.isdigit():
        raise MalformedRecord(line_no, f"file_id must be digits, got {file_id!r}")
    try:
        file_type = FileType(obj["file_type"])
    except ValueError:
        raise UnknownFileType(obj["file_type"]) from None
    if not obj["topic"]:
        raise MalformedRecord(line_no, "topic must be non-empty")

    text_repr = obj.get("text_repr", "")
    if not isinstance(text_repr, str):
        raise MalformedRecord(line_no, "text_repr must be a string")

    return ArchiveFile(
        file_id=file_id,
        file_type=file_type,
        topic=obj["topic"],
        title=obj["title"],
        text_repr=text_repr,
        metadata_physical=_parse_string_map(obj.get("metadata_physical", {}), line_no, "metadata_physical"),
        metadata_custom=_parse_string_map(obj.get("metadata_custom", {}), line_no, "metadata_custom"),
        metadata_ai=_parse_string_map(obj.get("metadata_ai", {}), line_no, "metadata_ai"),
        extras={k: obj[k] for k in unknown},
    )


def build_store(files: Iterable[ArchiveFile], topics: list[str] | None = None) -> CorpusStore:
    """Assemble a CorpusStore, enforcing id uniqueness and the topic set.

    With ``topics=None`` the topic set is collected from the files in
    first-seen order; when supplied, it is treated as closed-world and a file
    with an unlisted topic is rejected.
    """
    by_id: dict[str, ArchiveFile] = {}
    seen_topics: list[str] = []
    counts: dict[FileType, int] = {}
    for f in files:
        f.validate()
        if f.file_id in by_id:
            raise DuplicateFileId(f.file_id)
        if topics is not None and f.topic not in topics:
            raise MalformedRecord(0, f"topic {f.topic!r} not in configured topic set")
        by_id[f.file_id] = f
        if f.topic not in seen_topics:
            seen_topics.append(f.topic)
        counts[f.file_type] = counts.get(f.file_type, 0) + 1
    store = CorpusStore(files=by_id, topics=list(topics) if topics is not None else seen_topics, per_type_counts=counts)
    store.check_invariants()
    return store


def load_corpus(path: str | Path, topics: list[str] | None = None, lax: bool = False) -> CorpusStore:
    """Parse a line-delimited record file into a CorpusStore."""
    files: list[ArchiveFile] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "record must be a JSON object")
            files.append(parse_record(obj, line_no, lax=lax))
    return build_store(files, topics=topics)


def save_corpus(store: CorpusStore, path: str | Path) -> None:
    """Write the store back out, one JSON object per line (round-trips load_corpus)."""
    with open(path, "w", encoding="utf-8") as fh:
        for f in store.files.values():
            fh.write(json.dumps(f.to_record(), ensure_ascii=False) + "\n")


DESCRIBE_PREFIX = "Describe briefly:"


def enrichment_prompt(file: ArchiveFile) -> str:
    return f'{DESCRIBE_PREFIX} {file.file_type.value} file "{file.title}" about {file.topic}.'


def enrich_text_repr(file: ArchiveFile, llm) -> ArchiveFile:
    """Fill an empty textual representation from the LLM provider.

    Idempotent: a file that already has a text_repr is returned unchanged.
    Provider failures are surfaced, never swallowed; the input file is left
    untouched in that case. file_id, file_type and topic are never mutated.
    """
    if file.text_repr:
        return file
    description = llm.complete(enrichment_prompt(file))
    if not description.strip():
        raise ProviderError("provider returned an empty description")
    meta_ai = dict(file.metadata_ai)
    meta_ai["generated_description"] = description
    return dataclasses.replace(file, text_repr=description, metadata_ai=meta_ai)


def enrich_corpus(store: CorpusStore, llm) -> CorpusStore:
    """Enrich every file missing a text_repr; order-preserving."""
    enriched = [enrich_text_repr(f, llm) for f in store.files.values()]
    return build_store(enriched, topics=store.topics)

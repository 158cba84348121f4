"""Response synthesis: one LLM call over the retrieved chunks, plus the
extraction of cited file IDs that the evaluation metrics are defined on.

The prompt mandates structured ``[file_id: <id>]`` citation markers and the
extractor prefers them, falling back to bare digit runs filtered against the
corpus for LLMs that ignore the instruction. Extraction keeps first-occurrence
order and de-duplicates, so the cited list is a well-defined set with an
order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .corpus import ENGINE_ORDER, CorpusStore
from .errors import ProviderError
from .indexing import Chunk
from .retrieval import ScoredNode

NO_RESULTS_TEXT = "No matching files found for this query."
PROVIDER_FAILURE_TEXT = "The language model provider failed; no files can be recommended."

DEFAULT_FORMAT_INSTRUCTIONS = (
    "Cite every file you recommend inline with a marker of the form "
    "[file_id: <id>]. The candidates include {filetypes} files; present each "
    "recommendation in a form suited to its media type."
)

_SLOTS = ("{query}", "{chunks}", "{format_instructions}")

_MARKER_ID_RE = re.compile(r"\[file_id:\s*(\d+)\]")
_DIGIT_RUN_RE = re.compile(r"\d+")


@dataclass
class SynthesisPrompt:
    template: str
    format_instructions: str = DEFAULT_FORMAT_INSTRUCTIONS

    def validate(self) -> None:
        for slot in _SLOTS:
            count = self.template.count(slot)
            if count != 1:
                raise ValueError(f"template must contain {slot} exactly once, found {count}")

    @classmethod
    def default(cls) -> "SynthesisPrompt":
        template = resources.files("smartsearch").joinpath("prompts/synthesis_prompt.txt").read_text("utf-8")
        prompt = cls(template=template)
        prompt.validate()
        return prompt

    @classmethod
    def from_file(cls, path: str | Path) -> "SynthesisPrompt":
        prompt = cls(template=Path(path).read_text(encoding="utf-8"))
        prompt.validate()
        return prompt


@dataclass
class SynthesizedResponse:
    text: str
    cited_file_ids: list[str]
    degradation_flags: set[str] = field(default_factory=set)
    timings: dict[str, float] = field(default_factory=dict)


def render_chunk_block(node: ScoredNode, corpus: CorpusStore, chunk: Chunk) -> str:
    file = corpus.files[node.file_id]
    return f'[file_id: {file.file_id}] ({file.file_type.value}) "{file.title}"\n{chunk.text}'


def render_prompt(
    query_en: str,
    nodes: list[ScoredNode],
    corpus: CorpusStore,
    chunk_lookup: Mapping[str, Chunk],
    prompt: SynthesisPrompt,
) -> str:
    """Fill the template; the chunk blocks keep the given (reordered) order.

    The format instructions name each distinct filetype present so the
    response format can adapt to the media mix.
    """
    prompt.validate()
    blocks = [render_chunk_block(n, corpus, chunk_lookup[n.chunk_id]) for n in nodes]
    present = {corpus.files[n.file_id].file_type for n in nodes}
    names = [ft.value for ft in ENGINE_ORDER if ft in present]
    if not names:
        filetypes = "no"
    elif len(names) == 1:
        filetypes = names[0]
    else:
        filetypes = ", ".join(names[:-1]) + " and " + names[-1]
    instructions = prompt.format_instructions.replace("{filetypes}", filetypes)
    # Single-pass substitution instead of str.format: queries and titles may
    # contain braces, and inserted content must never be re-expanded.
    parts = {
        "query": query_en,
        "chunks": "\n\n".join(blocks),
        "format_instructions": instructions,
    }
    return re.sub(
        r"\{(query|chunks|format_instructions)\}", lambda m: parts[m.group(1)], prompt.template
    )


def extract_file_ids(text: str, corpus: CorpusStore) -> list[str]:
    """IDs mentioned in a response: marker matches first, then bare digit runs.

    Only exact corpus file_ids survive; first occurrence wins; duplicates are
    dropped. Idempotent and order-stable.
    """
    candidates = _MARKER_ID_RE.findall(text) + _DIGIT_RUN_RE.findall(text)
    seen: set[str] = set()
    out: list[str] = []
    for token in candidates:
        if token in seen or token not in corpus.files:
            continue
        seen.add(token)
        out.append(token)
    return out


def synthesize(
    query_en: str,
    nodes: list[ScoredNode],
    llm,
    prompt: SynthesisPrompt,
    corpus: CorpusStore,
    chunk_lookup: Mapping[str, Chunk],
) -> SynthesizedResponse:
    """Produce the structured answer and extract its cited file IDs.

    Empty input yields the fixed no-results text. A provider failure yields
    an error response with empty citations and a degradation flag; evaluation
    counts that as a retrieval miss.
    """
    if not nodes:
        return SynthesizedResponse(text=NO_RESULTS_TEXT, cited_file_ids=[])
    rendered = render_prompt(query_en, nodes, corpus, chunk_lookup, prompt)
    try:
        text = llm.complete(rendered)
    except ProviderError:
        return SynthesizedResponse(
            text=PROVIDER_FAILURE_TEXT,
            cited_file_ids=[],
            degradation_flags={"synthesis_failed"},
        )
    return SynthesizedResponse(text=text, cited_file_ids=extract_file_ids(text, corpus))

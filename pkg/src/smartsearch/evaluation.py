"""Benchmark generation, retrieval metrics, and the four experiment drivers.

The benchmark instantiates three query templates over four filetypes and ten
topics (one-filetype: 40, two-filetypes: 60, all-filetypes: 10; 110 total).
A query's ground truth is every corpus file matching its topic and one of its
target filetypes. The "retrieved" set for metrics is always the list of file
IDs cited in the synthesized response text, never the raw retriever output.

Experiments: (1) LLM comparison is the same driver pointed at different llm
backends or mock modes; (2) alpha sweep; (3) multilingual runs the Korean
variants; (4) ablation disables one component per variant, with the router
variant falling back to a single merged all-types index. Timings are
wall-clock per stage; with mock providers they measure framework overhead
only, so reports carry the backend label to prevent misreading.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from .config import AppConfig, build_providers
from .corpus import ENGINE_ORDER, ArchiveFile, CorpusStore, FileType, build_store
from .errors import TopicCountMismatch
from .indexing import build_typed_indices
from .pipeline import STAGES, SearchPipeline
from .providers.mocks import MockTranslator

DEFAULT_TOPICS = [
    "wildlife",
    "landscapes",
    "celebrities",
    "political events",
    "architecture",
    "space exploration",
    "street food",
    "folk music",
    "marine biology",
    "ancient history",
]

DEFAULT_PER_CELL = 3
DEFAULT_ALPHA_GRID = [round(0.1 * i, 1) for i in range(11)]
ABLATION_VARIANTS = ("no_translator", "no_router", "no_postprocessors")

# Filler vocabulary for synthetic textual representations. Deliberately
# disjoint from the query template words, the routing keywords, and the
# default topics, so synthetic text never smuggles a type or template signal
# into retrieval.
_FILLER = [
    "archive", "collection", "seasonal", "survey", "expedition", "rare",
    "vivid", "morning", "coastal", "heritage", "festival", "detailed",
    "catalog", "notes", "study", "series", "composition", "light",
    "weather", "journey", "observed", "captured", "scenes", "moments",
    "field", "local", "annual", "remote", "vast", "quiet",
]

_FLAVOR = {
    FileType.IMAGE: "photograph",
    FileType.AUDIO: "broadcast",
    FileType.VIDEO: "reel",
    FileType.DOCUMENT: "manuscript",
}

_TITLE_NOUN = {
    FileType.IMAGE: "Plate",
    FileType.AUDIO: "Session",
    FileType.VIDEO: "Reel",
    FileType.DOCUMENT: "Brief",
}

_FORMATS = {
    FileType.IMAGE: "jpeg",
    FileType.AUDIO: "wav",
    FileType.VIDEO: "mp4",
    FileType.DOCUMENT: "pdf",
}


def _make_text(rng: random.Random, topic: str, file_type: FileType) -> str:
    # Documents run long enough to split into multiple chunks; media
    # surrogates stay single-chunk.
    if file_type == FileType.DOCUMENT:
        n_filler = rng.randint(270, 300)
    else:
        n_filler = rng.randint(18, 30)
    words = [_FLAVOR[file_type]]
    for _ in range(n_filler):
        words.append(rng.choice(_FILLER))
    # The topic term is the retrieval signal; repeat it enough that it
    # dominates hashed-bucket collision noise in the bag-of-words embedding.
    for _ in range(rng.randint(3, 5)):
        pos = rng.randint(0, len(words))
        words[pos:pos] = topic.split()
    return " ".join(words)


def generate_corpus(
    topics: list[str] | None = None,
    per_cell: int = DEFAULT_PER_CELL,
    seed: int = 0,
) -> CorpusStore:
    """Deterministic synthetic corpus: per_cell files per (filetype, topic)."""
    if per_cell < 1:
        raise ValueError("per_cell must be >= 1")
    topics = list(topics) if topics is not None else list(DEFAULT_TOPICS)
    rng = random.Random(seed)
    used_ids: set[str] = set()
    files: list[ArchiveFile] = []
    for file_type in ENGINE_ORDER:
        for topic in topics:
            for i in range(per_cell):
                while True:
                    file_id = f"{rng.randrange(0, 10**10):010d}"
                    if file_id not in used_ids:
                        used_ids.add(file_id)
                        break
                text = _make_text(rng, topic, file_type)
                created = f"20{rng.randint(18, 25)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
                files.append(
                    ArchiveFile(
                        file_id=file_id,
                        file_type=file_type,
                        topic=topic,
                        title=f"{topic.title()} {_TITLE_NOUN[file_type]} {i + 1:02d}",
                        text_repr=text,
                        metadata_physical={
                            "format": _FORMATS[file_type],
                            "size_bytes": str(rng.randrange(10_000, 5_000_000)),
                            "created": created,
                        },
                        metadata_custom={"collection": f"shelf-{rng.randint(1, 9)}"},
                        metadata_ai={"generated_description": " ".join(text.split()[:12])},
                    )
                )
    return build_store(files, topics=topics)


@dataclass
class EvalQuery:
    query_id: str
    text_en: str
    text_ko: str | None
    query_type: str  # one_filetype | two_filetypes | all_filetypes
    target_types: tuple[FileType, ...]
    topic: str


def _slug(topic: str) -> str:
    return topic.replace(" ", "-")


def generate_queries(topics: list[str] | None = None, free_size: bool = False) -> list[EvalQuery]:
    """All template instantiations, with Korean variants from the mock lexicon.

    Strict mode demands exactly ten topics (4x10 + 6x10 + 10 = 110 queries);
    free_size lifts that for smaller or larger topic sets.
    """
    topics = list(topics) if topics is not None else list(DEFAULT_TOPICS)
    if len(topics) != 10 and not free_size:
        raise TopicCountMismatch(f"expected 10 topics, got {len(topics)} (use free_size to override)")
    translator = MockTranslator()

    def ko(text: str) -> str:
        return translator.translate(text, source="en", target="ko")

    queries: list[EvalQuery] = []
    for file_type in ENGINE_ORDER:
        for topic in topics:
            text = f"Recommend some {file_type.value} files about {topic}"
            queries.append(
                EvalQuery(
                    query_id=f"t1_{file_type.value}_{_slug(topic)}",
                    text_en=text,
                    text_ko=ko(text),
                    query_type="one_filetype",
                    target_types=(file_type,),
                    topic=topic,
                )
            )
    for first, second in combinations(ENGINE_ORDER, 2):
        for topic in topics:
            text = f"Retrieve some {first.value} or {second.value} files about {topic}"
            queries.append(
                EvalQuery(
                    query_id=f"t2_{first.value}_{second.value}_{_slug(topic)}",
                    text_en=text,
                    text_ko=ko(text),
                    query_type="two_filetypes",
                    target_types=(first, second),
                    topic=topic,
                )
            )
    for topic in topics:
        text = f"Give me some files about {topic}"
        queries.append(
            EvalQuery(
                query_id=f"t3_{_slug(topic)}",
                text_en=text,
                text_ko=ko(text),
                query_type="all_filetypes",
                target_types=tuple(ENGINE_ORDER),
                topic=topic,
            )
        )
    return queries


def ground_truth(corpus: CorpusStore, query: EvalQuery) -> set[str]:
    return {
        f.file_id
        for f in corpus.files.values()
        if f.topic == query.topic and f.file_type in query.target_types
    }


def compute_metrics(retrieved, relevant) -> tuple[float, float, float]:
    """Precision, recall, F1 over plain sets; empty denominators yield 0."""
    retrieved_set = set(retrieved)
    relevant_set = set(relevant)
    inter = len(retrieved_set & relevant_set)
    precision = inter / len(retrieved_set) if retrieved_set else 0.0
    recall = inter / len(relevant_set) if relevant_set else 0.0
    f1 = 0.0 if precision + recall == 0.0 else 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1


@dataclass
class QueryOutcome:
    query_id: str
    query_type: str
    language: str
    topic: str
    target_types: tuple[str, ...]
    retrieved_ids: list[str]
    relevant_ids: list[str]  # sorted
    precision: float
    recall: float
    f1: float
    hit: bool
    stage_ms: dict[str, float]
    total_ms: float


GROUP_ORDER = ("one_filetype", "two_filetypes", "all_filetypes", "average")


def aggregate(outcomes: list[QueryOutcome]) -> dict[str, float]:
    n = len(outcomes)
    if n == 0:
        return {"n": 0, "precision": 0.0, "recall": 0.0, "f1": 0.0, "hit_rate": 0.0}
    return {
        "n": n,
        "precision": 100.0 * (sum(o.precision for o in outcomes) / n),
        "recall": 100.0 * (sum(o.recall for o in outcomes) / n),
        "f1": 100.0 * (sum(o.f1 for o in outcomes) / n),
        "hit_rate": 100.0 * (sum(1 for o in outcomes if o.hit) / n),
    }


@dataclass
class MetricsReport:
    per_query: list[QueryOutcome]
    groups: dict[str, dict[str, float]]
    config_fingerprint: str
    backend: str
    language: str

    @property
    def overall(self) -> dict[str, float]:
        return self.groups["average"]


def _build_report(
    outcomes: list[QueryOutcome], fingerprint: str, backend: str, language: str
) -> MetricsReport:
    groups = {
        name: aggregate([o for o in outcomes if o.query_type == name])
        for name in GROUP_ORDER[:3]
    }
    groups["average"] = aggregate(outcomes)
    return MetricsReport(
        per_query=outcomes,
        groups=groups,
        config_fingerprint=fingerprint,
        backend=backend,
        language=language,
    )


def run_experiment(
    pipeline: SearchPipeline,
    queries: list[EvalQuery],
    language: str = "en",
    alpha: float | None = None,
    ablation: dict | None = None,
) -> MetricsReport:
    """Run every query through the full pipeline and score the cited IDs.

    Per-query provider failures are recorded as misses (empty citations);
    they never abort the run.
    """
    outcomes: list[QueryOutcome] = []
    for query in queries:
        text = query.text_ko if language == "ko" and query.text_ko else query.text_en
        t0 = time.perf_counter()
        response, trace = pipeline.query(text, alpha=alpha, ablation=ablation)
        total_ms = (time.perf_counter() - t0) * 1000.0
        relevant = ground_truth(pipeline.corpus, query)
        precision, recall, f1 = compute_metrics(response.cited_file_ids, relevant)
        outcomes.append(
            QueryOutcome(
                query_id=query.query_id,
                query_type=query.query_type,
                language=language,
                topic=query.topic,
                target_types=tuple(t.value for t in query.target_types),
                retrieved_ids=list(response.cited_file_ids),
                relevant_ids=sorted(relevant),
                precision=precision,
                recall=recall,
                f1=f1,
                hit=bool(set(response.cited_file_ids) & relevant),
                stage_ms=dict(trace.stage_ms),
                total_ms=total_ms,
            )
        )
    backend = pipeline.config.providers["llm"].backend
    fingerprint = pipeline.config.fingerprint()
    return _build_report(outcomes, fingerprint, backend, language)


def alpha_sweep(
    pipeline: SearchPipeline,
    queries: list[EvalQuery],
    alphas: list[float] | None = None,
    language: str = "en",
) -> list[tuple[float, MetricsReport]]:
    grid = list(alphas) if alphas is not None else list(DEFAULT_ALPHA_GRID)
    return [(a, run_experiment(pipeline, queries, language=language, alpha=a)) for a in grid]


_VARIANT_ABLATION = {
    "no_translator": {"translator": False},
    "no_router": {"router": False},
    "no_postprocessors": {"postprocessors": False},
}


def run_ablation(
    pipeline: SearchPipeline,
    queries: list[EvalQuery],
    variants: tuple[str, ...] = ABLATION_VARIANTS,
    language: str = "ko",
) -> list[tuple[str, MetricsReport]]:
    """Baseline plus one report per removed component.

    Defaults to the Korean query set: translator removal only bites when the
    queries actually need translating.
    """
    for v in variants:
        if v not in _VARIANT_ABLATION:
            raise ValueError(f"unknown ablation variant {v!r}")
    rows = [("baseline", run_experiment(pipeline, queries, language=language))]
    for variant in variants:
        rows.append(
            (variant, run_experiment(pipeline, queries, language=language, ablation=_VARIANT_ABLATION[variant]))
        )
    return rows


# --- CSV serialization ------------------------------------------------------
#
# Column orders are fixed and documented in the README; list-valued fields
# join on "|". Floats are serialized with str() (shortest round-trip repr),
# which makes reports diffable and lets an independent implementation of the
# documented formulas reproduce the files byte for byte.

REPORT_COLUMNS = [
    "query_id", "query_type", "language", "topic", "target_types",
    "retrieved_ids", "relevant_ids", "precision", "recall", "f1", "hit",
]
TIMING_COLUMNS = [f"{stage}_ms" for stage in STAGES] + ["total_ms"]
SUMMARY_COLUMNS = ["group", "n_queries", "precision", "recall", "f1", "hit_rate", "backend", "language", "config_fingerprint"]
SWEEP_COLUMNS = ["alpha", "n_queries", "precision", "recall", "f1", "hit_rate"]
ABLATION_COLUMNS = [
    "variant", "n_queries", "precision", "recall", "f1", "hit_rate",
    "d_precision", "d_recall", "d_f1", "d_hit_rate",
]


def report_csv(report: MetricsReport, include_timings: bool = True) -> str:
    columns = REPORT_COLUMNS + (TIMING_COLUMNS if include_timings else [])
    lines = [",".join(columns)]
    for o in report.per_query:
        row = [
            o.query_id,
            o.query_type,
            o.language,
            o.topic,
            "|".join(o.target_types),
            "|".join(o.retrieved_ids),
            "|".join(o.relevant_ids),
            str(o.precision),
            str(o.recall),
            str(o.f1),
            "true" if o.hit else "false",
        ]
        if include_timings:
            row.extend(str(o.stage_ms.get(stage, 0.0)) for stage in STAGES)
            row.append(str(o.total_ms))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def summary_csv(report: MetricsReport) -> str:
    lines = [",".join(SUMMARY_COLUMNS)]
    for name in GROUP_ORDER:
        g = report.groups[name]
        lines.append(
            ",".join(
                [
                    name,
                    str(g["n"]),
                    str(g["precision"]),
                    str(g["recall"]),
                    str(g["f1"]),
                    str(g["hit_rate"]),
                    report.backend,
                    report.language,
                    report.config_fingerprint,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def sweep_csv(rows: list[tuple[float, MetricsReport]]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for alpha, report in rows:
        g = report.overall
        lines.append(
            ",".join(
                [str(alpha), str(g["n"]), str(g["precision"]), str(g["recall"]), str(g["f1"]), str(g["hit_rate"])]
            )
        )
    return "\n".join(lines) + "\n"


def ablation_csv(rows: list[tuple[str, MetricsReport]]) -> str:
    baseline = rows[0][1].overall
    lines = [",".join(ABLATION_COLUMNS)]
    for name, report in rows:
        g = report.overall
        lines.append(
            ",".join(
                [
                    name,
                    str(g["n"]),
                    str(g["precision"]),
                    str(g["recall"]),
                    str(g["f1"]),
                    str(g["hit_rate"]),
                    str(g["precision"] - baseline["precision"]),
                    str(g["recall"] - baseline["recall"]),
                    str(g["f1"] - baseline["f1"]),
                    str(g["hit_rate"] - baseline["hit_rate"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def build_mock_pipeline(corpus: CorpusStore, config: AppConfig | None = None) -> SearchPipeline:
    """Index the corpus and wire a pipeline; default config means all-mock."""
    config = config or AppConfig()
    config.validate()
    providers = build_providers(config)
    index_set = build_typed_indices(
        corpus,
        chunk_size=config.chunking.chunk_size,
        overlap=config.chunking.overlap,
        embedder=providers.embedder,
        k1=config.bm25.k1,
        b=config.bm25.b,
    )
    return SearchPipeline(corpus, index_set, providers, config)

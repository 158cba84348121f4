"""The end-to-end query pipeline.

Stage order is fixed and always recorded in the trace:

    translate -> route -> retrieve -> postprocess -> synthesize -> backtranslate

Ablation flags disable the translator (raw query passes straight through),
the router (one merged index spanning all filetypes replaces per-type
routing), or the post-processors (identity on the node list). Provider
failures inside a stage degrade per that module's policy and set a flag;
only configuration and missing-index problems abort a query.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .config import AblationFlags, AppConfig
from .corpus import CorpusStore
from .indexing import TypedIndexSet
from .language import LanguageTag, detect_language, from_english, to_english
from .postprocess import PostProcessConfig, apply_postprocessors
from .providers.base import ProviderSet
from .retrieval import RetrievalParams, hybrid_retrieve
from .routing import classify_query, route_and_query, summarize_results
from .synthesis import SynthesisPrompt, SynthesizedResponse, synthesize

STAGES = ("translate", "route", "retrieve", "postprocess", "synthesize", "backtranslate")


@dataclass
class QueryTrace:
    language: str | None = None
    language_confidence: float = 0.0
    translation_degraded: bool = False
    route_method: str | None = None
    route_engines: list[str] = field(default_factory=list)
    route_rationale: str = ""
    per_engine_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    stage_node_ids: dict[str, list[str]] = field(default_factory=dict)
    stage_ms: dict[str, float] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    def add_flag(self, flag: str) -> None:
        if flag not in self.flags:
            self.flags.append(flag)

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "language_confidence": self.language_confidence,
            "translation_degraded": self.translation_degraded,
            "route": {
                "method": self.route_method,
                "engines": self.route_engines,
                "rationale": self.route_rationale,
                "per_engine_counts": self.per_engine_counts,
            },
            "stage_node_ids": self.stage_node_ids,
            "stage_ms": self.stage_ms,
            "flags": self.flags,
        }


def _merge_ablation(base: AblationFlags, override: dict | None) -> AblationFlags:
    if not override:
        return base
    return AblationFlags(
        translator=override.get("translator", base.translator),
        router=override.get("router", base.router),
        postprocessors=override.get("postprocessors", base.postprocessors),
    )


class SearchPipeline:
    """Immutable corpus + indices + providers, queried concurrently."""

    def __init__(
        self,
        corpus: CorpusStore,
        index_set: TypedIndexSet,
        providers: ProviderSet,
        config: AppConfig,
    ):
        self.corpus = corpus
        self.index_set = index_set
        self.providers = providers
        self.config = config
        if config.synthesis_prompt_path:
            self.prompt = SynthesisPrompt.from_file(config.synthesis_prompt_path)
        else:
            self.prompt = SynthesisPrompt.default()

    def query(
        self,
        raw_query: str,
        *,
        alpha: float | None = None,
        final_k: int | None = None,
        top_k_per_branch: int | None = None,
        rerank_top_n: int | None = None,
        ablation: dict | None = None,
    ) -> tuple[SynthesizedResponse, QueryTrace]:
        base = self.config.retrieval
        params = RetrievalParams(
            alpha=base.alpha if alpha is None else alpha,
            top_k_per_branch=base.top_k_per_branch if top_k_per_branch is None else top_k_per_branch,
            final_k=base.final_k if final_k is None else final_k,
        )
        params.validate()
        pp_base = self.config.postprocess
        pp_config = PostProcessConfig(
            rerank_enabled=pp_base.rerank_enabled,
            rerank_top_n=pp_base.rerank_top_n if rerank_top_n is None else rerank_top_n,
            reorder_enabled=pp_base.reorder_enabled,
        )
        flags = _merge_ablation(self.config.ablation, ablation)
        trace = QueryTrace()

        # translate
        t0 = time.perf_counter()
        lang: LanguageTag | None = None
        if flags.translator:
            lang, note = detect_language(raw_query, self.providers.detector)
            if note:
                trace.add_flag("detection_defaulted")
            translated = to_english(raw_query, lang, self.providers.translator)
            if translated.degraded:
                trace.add_flag("translation_degraded")
                trace.translation_degraded = True
            query_en = translated.english
            trace.language = lang.code
            trace.language_confidence = lang.confidence
        else:
            query_en = raw_query
            trace.add_flag("translator_disabled")
        trace.stage_ms["translate"] = (time.perf_counter() - t0) * 1000.0

        # route
        t0 = time.perf_counter()
        decision = None
        if flags.router:
            decision = classify_query(query_en, self.providers.llm)
            trace.route_method = decision.method
            trace.route_engines = [ft.value for ft in decision.engines]
            trace.route_rationale = decision.rationale
        else:
            trace.route_method = "disabled"
            trace.route_engines = ["merged"]
            trace.route_rationale = "router disabled; querying one merged all-types index"
            trace.add_flag("router_disabled")
        trace.stage_ms["route"] = (time.perf_counter() - t0) * 1000.0

        # retrieve
        t0 = time.perf_counter()
        if decision is not None:
            results = route_and_query(
                query_en, decision, self.index_set, params, self.providers.embedder
            )
            for result in results:
                if result.missing_index:
                    trace.add_flag(f"missing_index_{result.file_type.value}")
                trace.per_engine_counts[result.file_type.value] = {
                    "fused": len(result.nodes),
                    "bm25": sum(1 for n in result.nodes if n.bm25_score is not None),
                    "vector": sum(1 for n in result.nodes if n.vector_score is not None),
                }
            nodes = summarize_results(results, params.final_k)
        else:
            nodes = hybrid_retrieve(
                query_en, self.index_set.merged_pair(), params, self.providers.embedder
            )
            trace.per_engine_counts["merged"] = {
                "fused": len(nodes),
                "bm25": sum(1 for n in nodes if n.bm25_score is not None),
                "vector": sum(1 for n in nodes if n.vector_score is not None),
            }
        trace.stage_node_ids["retrieve"] = [n.chunk_id for n in nodes]
        trace.stage_ms["retrieve"] = (time.perf_counter() - t0) * 1000.0

        # postprocess
        t0 = time.perf_counter()
        if flags.postprocessors:
            nodes, pp_flags = apply_postprocessors(
                query_en, nodes, self.index_set.chunk_lookup, self.providers.reranker, pp_config
            )
            for f in pp_flags:
                trace.add_flag(f)
        else:
            trace.add_flag("postprocessors_disabled")
        trace.stage_node_ids["postprocess"] = [n.chunk_id for n in nodes]
        trace.stage_ms["postprocess"] = (time.perf_counter() - t0) * 1000.0

        # synthesize
        t0 = time.perf_counter()
        response = synthesize(
            query_en, nodes, self.providers.llm, self.prompt, self.corpus, self.index_set.chunk_lookup
        )
        for f in response.degradation_flags:
            trace.add_flag(f)
        trace.stage_node_ids["synthesize"] = list(response.cited_file_ids)
        trace.stage_ms["synthesize"] = (time.perf_counter() - t0) * 1000.0

        # backtranslate
        t0 = time.perf_counter()
        if flags.translator and lang is not None and lang.code != "en":
            text, degraded = from_english(response.text, lang, self.providers.translator)
            response.text = text
            if degraded:
                trace.add_flag("backtranslation_degraded")
        trace.stage_ms["backtranslate"] = (time.perf_counter() - t0) * 1000.0

        response.degradation_flags = set(trace.flags)
        response.timings = dict(trace.stage_ms)
        return response, trace

"""HTTP face of the pipeline: /v1/query, /healthz, /v1/config, and /ui/.

The service is single-process with read-only shared indices; per-request
pipeline state is isolated, so concurrent identical requests return identical
responses modulo timing fields.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import AppConfig, build_providers, config_to_dict
from .corpus import load_corpus
from .errors import IndexNotReady
from .indexing import load_index_set
from .pipeline import SearchPipeline


class AblationBody(BaseModel):
    translator: bool | None = None
    router: bool | None = None
    postprocessors: bool | None = None


class QueryBody(BaseModel):
    query: str = Field(min_length=1)
    alpha: float | None = None
    k: int | None = None
    branch_k: int | None = None
    rerank_top_n: int | None = None
    ablation: AblationBody | None = None


def load_pipeline(config: AppConfig) -> SearchPipeline:
    """Assemble a pipeline from on-disk artifacts produced by `ingest`."""
    index_dir = Path(config.index_dir)
    if not (index_dir / "manifest.json").exists():
        raise IndexNotReady(f"no index found in {index_dir}; run `smartsearch ingest` first")
    enriched = index_dir / "corpus.enriched.jsonl"
    corpus_path = enriched if enriched.exists() else Path(config.corpus_path)
    corpus = load_corpus(corpus_path, topics=config.topics, lax=config.lax_corpus)
    index_set = load_index_set(index_dir)
    providers = build_providers(config)
    return SearchPipeline(corpus, index_set, providers, config)


def create_app(config: AppConfig, pipeline: SearchPipeline | None = None) -> FastAPI:
    app = FastAPI(title="smartsearch", version="0.1.0")
    app.state.config = config
    app.state.pipeline = pipeline

    @app.get("/healthz")
    def healthz():
        if app.state.pipeline is None:
            raise HTTPException(status_code=503, detail="index not ready")
        return {"status": "ok"}

    @app.get("/v1/config")
    def get_config():
        data = config_to_dict(config)
        # Secrets only ever live in env vars; expose variable names, not values.
        return {"config": data, "ui": {"url_template": config.server.url_template}}

    @app.post("/v1/query")
    def query(body: QueryBody):
        pipe: SearchPipeline | None = app.state.pipeline
        if pipe is None:
            raise HTTPException(status_code=503, detail="index not ready")
        ablation = body.ablation.model_dump(exclude_none=True) if body.ablation else None
        try:
            response, trace = pipe.query(
                body.query,
                alpha=body.alpha,
                final_k=body.k,
                top_k_per_branch=body.branch_k,
                rerank_top_n=body.rerank_top_n,
                ablation=ablation,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {
            "text": response.text,
            "file_ids": response.cited_file_ids,
            "language": trace.language,
            "trace": trace.to_dict(),
        }

    ui_dir = Path(config.server.ui_dir)
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

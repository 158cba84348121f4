"""Command-line entry points: ingest, serve, query, and the experiment drivers."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import AppConfig, apply_env_overrides, build_providers, load_config
from .corpus import enrich_corpus, load_corpus, save_corpus
from .errors import SmartSearchError
from .evaluation import (
    ABLATION_VARIANTS,
    ablation_csv,
    alpha_sweep,
    build_mock_pipeline,
    generate_corpus,
    generate_queries,
    report_csv,
    run_ablation,
    run_experiment,
    summary_csv,
    sweep_csv,
)
from .indexing import build_typed_indices, save_index_set
from .pipeline import SearchPipeline
from .server import create_app, load_pipeline


def _load_app_config(config_path: str | None) -> AppConfig:
    config = load_config(config_path) if config_path else AppConfig()
    config.validate()
    return apply_env_overrides(config)


def _set_backend(config: AppConfig, backend: str) -> AppConfig:
    for provider in config.providers.values():
        provider.backend = backend
    config.validate()
    return config


def _mock_eval_setup(config_path, seed, per_cell, backend, llm_mode, alpha):
    config = _load_app_config(config_path)
    if backend:
        _set_backend(config, backend)
    config.mock.seed = seed
    if llm_mode:
        config.mock.llm_mode = llm_mode
    if alpha is not None:
        config.retrieval.alpha = alpha
    config.validate()
    corpus = generate_corpus(topics=config.topics, per_cell=per_cell, seed=seed)
    queries = generate_queries(topics=config.topics, free_size=config.topics is not None)
    pipeline = build_mock_pipeline(corpus, config)
    return config, corpus, queries, pipeline


def _write(out_dir: str, name: str, content: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    target.write_text(content, encoding="utf-8")
    return target


def _print_summary(report) -> None:
    click.echo(f"{'group':<16}{'n':>5}{'precision':>12}{'recall':>10}{'f1':>10}{'hit_rate':>10}")
    for name, g in report.groups.items():
        click.echo(
            f"{name:<16}{g['n']:>5}{g['precision']:>12.2f}{g['recall']:>10.2f}"
            f"{g['f1']:>10.2f}{g['hit_rate']:>10.2f}"
        )


@click.group()
def main():
    """Smart search for multimodal digital archives."""


_config_option = click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="Path to a JSON config file.")


@main.command()
@_config_option
@click.option("--lax", is_flag=True, help="Preserve unknown corpus record keys instead of rejecting them.")
def ingest(config_path, lax):
    """Load the corpus, enrich missing text, build and persist the indices."""
    config = _load_app_config(config_path)
    if lax:
        config.lax_corpus = True
    providers = build_providers(config)
    corpus = load_corpus(config.corpus_path, topics=config.topics, lax=config.lax_corpus)
    corpus = enrich_corpus(corpus, providers.llm)
    index_set = build_typed_indices(
        corpus,
        chunk_size=config.chunking.chunk_size,
        overlap=config.chunking.overlap,
        embedder=providers.embedder,
        k1=config.bm25.k1,
        b=config.bm25.b,
    )
    save_index_set(index_set, config.index_dir)
    save_corpus(corpus, Path(config.index_dir) / "corpus.enriched.jsonl")
    click.echo(
        f"ingested {len(corpus)} files, {len(index_set.chunk_lookup)} chunks, "
        f"{len(index_set.per_type)} typed indices -> {config.index_dir}"
    )


@main.command()
@_config_option
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(config_path, host, port):
    """Run the HTTP service (requires a prior ingest)."""
    import uvicorn

    config = _load_app_config(config_path)
    if host:
        config.server.host = host
    if port:
        config.server.port = port
    try:
        pipeline = load_pipeline(config)
    except SmartSearchError as exc:
        click.echo(f"warning: {exc}; serving in not-ready state", err=True)
        pipeline = None
    app = create_app(config, pipeline)
    uvicorn.run(app, host=config.server.host, port=config.server.port)


@main.command()
@_config_option
@click.argument("text")
@click.option("--alpha", type=float, default=None, help="Fusion weight override in [0,1].")
@click.option("--k", type=int, default=None, help="Final result count override.")
@click.option("--branch-k", type=int, default=None, help="Per-branch candidate count override.")
@click.option("--rerank-top-n", type=int, default=None)
@click.option("--no-rerank", is_flag=True)
@click.option("--no-reorder", is_flag=True)
@click.option("--no-translator", is_flag=True)
@click.option("--no-router", is_flag=True)
@click.option("--no-postprocessors", is_flag=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the full response and trace as JSON.")
def query(config_path, text, alpha, k, branch_k, rerank_top_n, no_rerank, no_reorder,
          no_translator, no_router, no_postprocessors, as_json):
    """Run one query against the persisted indices."""
    config = _load_app_config(config_path)
    if no_rerank:
        config.postprocess.rerank_enabled = False
    if no_reorder:
        config.postprocess.reorder_enabled = False
    pipeline = load_pipeline(config)
    ablation = {}
    if no_translator:
        ablation["translator"] = False
    if no_router:
        ablation["router"] = False
    if no_postprocessors:
        ablation["postprocessors"] = False
    response, trace = pipeline.query(
        text,
        alpha=alpha,
        final_k=k,
        top_k_per_branch=branch_k,
        rerank_top_n=rerank_top_n,
        ablation=ablation or None,
    )
    if as_json:
        click.echo(json.dumps(
            {"text": response.text, "file_ids": response.cited_file_ids, "trace": trace.to_dict()},
            ensure_ascii=False, indent=2,
        ))
    else:
        click.echo(response.text)
        click.echo(f"file_ids: {', '.join(response.cited_file_ids) or '(none)'}")


@main.command(name="eval")
@_config_option
@click.option("--backend", type=click.Choice(["mock", "http"]), default="mock")
@click.option("--seed", type=int, default=0)
@click.option("--per-cell", type=int, default=3, help="Synthetic files per (filetype, topic) cell.")
@click.option("--alpha", type=float, default=None)
@click.option("--language", type=click.Choice(["en", "ko"]), default="en")
@click.option("--llm-mode", type=click.Choice(["citing_oracle", "echo", "drop_half", "fail"]), default=None,
              help="Mock LLM behavior; point different modes at the same benchmark to compare models.")
@click.option("--out", "out_dir", default="eval_out", help="Directory for report.csv and summary.csv.")
def eval_cmd(config_path, backend, seed, per_cell, alpha, language, llm_mode, out_dir):
    """Run the full benchmark and write per-query and summary CSVs."""
    _config, _corpus, queries, pipeline = _mock_eval_setup(
        config_path, seed, per_cell, backend, llm_mode, alpha
    )
    report = run_experiment(pipeline, queries, language=language)
    _write(out_dir, "report.csv", report_csv(report))
    _write(out_dir, "summary.csv", summary_csv(report))
    _print_summary(report)
    click.echo(f"wrote {out_dir}/report.csv and {out_dir}/summary.csv")


@main.command(name="sweep-alpha")
@_config_option
@click.option("--alphas", default=None, help="Comma-separated grid; default 0.0..1.0 by 0.1.")
@click.option("--backend", type=click.Choice(["mock", "http"]), default="mock")
@click.option("--seed", type=int, default=0)
@click.option("--per-cell", type=int, default=3)
@click.option("--language", type=click.Choice(["en", "ko"]), default="en")
@click.option("--out", "out_dir", default="eval_out")
def sweep_alpha_cmd(config_path, alphas, backend, seed, per_cell, language, out_dir):
    """Sweep the fusion weight and write one summary row per alpha."""
    grid = [float(a) for a in alphas.split(",")] if alphas else None
    _config, _corpus, queries, pipeline = _mock_eval_setup(config_path, seed, per_cell, backend, None, None)
    rows = alpha_sweep(pipeline, queries, alphas=grid, language=language)
    _write(out_dir, "sweep.csv", sweep_csv(rows))
    for alpha, report in rows:
        g = report.overall
        click.echo(f"alpha={alpha:<4} precision={g['precision']:.2f} recall={g['recall']:.2f} "
                   f"f1={g['f1']:.2f} hit_rate={g['hit_rate']:.2f}")
    click.echo(f"wrote {out_dir}/sweep.csv")


@main.command()
@_config_option
@click.option("--variants", default=",".join(ABLATION_VARIANTS),
              help="Comma-separated subset of no_translator,no_router,no_postprocessors.")
@click.option("--backend", type=click.Choice(["mock", "http"]), default="mock")
@click.option("--seed", type=int, default=0)
@click.option("--per-cell", type=int, default=6,
              help="Denser default than eval: merged-index dilution needs real per-topic competition.")
@click.option("--language", type=click.Choice(["en", "ko"]), default="ko",
              help="Defaults to Korean so the translator variant actually bites.")
@click.option("--out", "out_dir", default="eval_out")
def ablate(config_path, variants, backend, seed, per_cell, language, out_dir):
    """Component-reduction study: baseline plus one run per removed component."""
    names = tuple(v.strip() for v in variants.split(",") if v.strip())
    _config, _corpus, queries, pipeline = _mock_eval_setup(config_path, seed, per_cell, backend, None, None)
    rows = run_ablation(pipeline, queries, variants=names, language=language)
    _write(out_dir, "ablation.csv", ablation_csv(rows))
    baseline = rows[0][1].overall
    for name, report in rows:
        g = report.overall
        deltas = ""
        if name != "baseline":
            def arrow(d):
                return f"{'↑' if d >= 0 else '↓'}{abs(d):.2f}"
            deltas = ("  (" + " ".join(
                f"{m}:{arrow(g[m] - baseline[m])}" for m in ("precision", "recall", "f1", "hit_rate")
            ) + ")")
        click.echo(f"{name:<20} precision={g['precision']:.2f} recall={g['recall']:.2f} "
                   f"f1={g['f1']:.2f} hit_rate={g['hit_rate']:.2f}{deltas}")
    click.echo(f"wrote {out_dir}/ablation.csv")


@main.command(name="gen-corpus")
@click.option("--out", "out_path", default="corpus.jsonl")
@click.option("--seed", type=int, default=0)
@click.option("--per-cell", type=int, default=3)
@click.option("--topics", default=None, help="Comma-separated topic list; default is the built-in ten.")
def gen_corpus(out_path, seed, per_cell, topics):
    """Write a deterministic synthetic corpus file."""
    topic_list = [t.strip() for t in topics.split(",")] if topics else None
    corpus = generate_corpus(topics=topic_list, per_cell=per_cell, seed=seed)
    save_corpus(corpus, out_path)
    click.echo(f"wrote {len(corpus)} records to {out_path}")


@main.command(name="gen-queries")
@click.option("--out", "out_path", default="queries.jsonl")
@click.option("--topics", default=None)
@click.option("--free-size", is_flag=True, help="Allow a topic count other than ten.")
def gen_queries(out_path, topics, free_size):
    """Write the benchmark query set as JSON lines."""
    topic_list = [t.strip() for t in topics.split(",")] if topics else None
    queries = generate_queries(topics=topic_list, free_size=free_size)
    with open(out_path, "w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(json.dumps(
                {
                    "query_id": q.query_id,
                    "text_en": q.text_en,
                    "text_ko": q.text_ko,
                    "query_type": q.query_type,
                    "target_types": [t.value for t in q.target_types],
                    "topic": q.topic,
                },
                ensure_ascii=False,
            ) + "\n")
    click.echo(f"wrote {len(queries)} queries to {out_path}")


def run_main() -> int:
    try:
        main(standalone_mode=False)
    except SmartSearchError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(run_main())

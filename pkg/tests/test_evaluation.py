import random

import pytest

from smartsearch.config import AppConfig
from smartsearch.corpus import ENGINE_ORDER, FileType
from smartsearch.errors import TopicCountMismatch
from smartsearch.evaluation import (
    DEFAULT_ALPHA_GRID,
    ablation_csv,
    aggregate,
    alpha_sweep,
    build_mock_pipeline,
    compute_metrics,
    generate_corpus,
    generate_queries,
    ground_truth,
    report_csv,
    run_ablation,
    run_experiment,
    summary_csv,
    sweep_csv,
)


# --- corpus generator --------------------------------------------------------

def test_corpus_counts_by_construction():
    assert len(generate_corpus(per_cell=3, seed=0)) == 120
    assert len(generate_corpus(per_cell=1, seed=0)) == 40


def test_corpus_deterministic_for_seed():
    assert generate_corpus(seed=9) == generate_corpus(seed=9)
    assert generate_corpus(seed=9) != generate_corpus(seed=10)


def test_corpus_ids_are_ten_digit_strings():
    store = generate_corpus(per_cell=1, seed=1)
    assert all(len(fid) == 10 and fid.isdigit() for fid in store.files)


def test_corpus_topic_term_present_in_text():
    store = generate_corpus(per_cell=1, seed=1)
    for f in store.files.values():
        assert f.topic.split()[0] in f.text_repr


def test_document_files_run_longer_than_media():
    store = generate_corpus(per_cell=1, seed=1)
    doc_len = min(len(f.text_repr.split()) for f in store.by_type(FileType.DOCUMENT))
    media_len = max(len(f.text_repr.split()) for f in store.by_type(FileType.IMAGE))
    assert doc_len > media_len


# --- query generator -----------------------------------------------------------

def test_query_counts_match_template_combinatorics(benchmark_queries):
    by_type = {}
    for q in benchmark_queries:
        by_type[q.query_type] = by_type.get(q.query_type, 0) + 1
    assert by_type == {"one_filetype": 40, "two_filetypes": 60, "all_filetypes": 10}
    assert len(benchmark_queries) == 110


def test_query_texts_follow_templates(benchmark_queries):
    t2 = next(q for q in benchmark_queries if q.query_id == "t2_image_audio_wildlife")
    assert t2.text_en == "Retrieve some image or audio files about wildlife"
    t1 = next(q for q in benchmark_queries if q.query_id == "t1_document_ancient-history")
    assert t1.text_en == "Recommend some document files about ancient history"
    t3 = next(q for q in benchmark_queries if q.query_id == "t3_wildlife")
    assert t3.text_en == "Give me some files about wildlife"
    assert t3.target_types == tuple(ENGINE_ORDER)


def test_queries_deterministic():
    assert generate_queries() == generate_queries()


def test_korean_variants_rendered(benchmark_queries):
    for q in benchmark_queries:
        assert q.text_ko
        assert q.text_ko != q.text_en


def test_topic_count_strictness():
    with pytest.raises(TopicCountMismatch):
        generate_queries(topics=["a", "b", "c", "d", "e"])
    small = generate_queries(topics=["alpha", "beta", "gamma", "delta", "epsilon"], free_size=True)
    by_type = {}
    for q in small:
        by_type[q.query_type] = by_type.get(q.query_type, 0) + 1
    assert by_type == {"one_filetype": 20, "two_filetypes": 30, "all_filetypes": 5}


# --- metrics ---------------------------------------------------------------------

def test_metric_arithmetic():
    assert compute_metrics({"A", "B"}, {"A", "C"}) == (0.5, 0.5, 0.5)
    assert compute_metrics(set(), {"A"}) == (0.0, 0.0, 0.0)
    assert compute_metrics({"A"}, set()) == (0.0, 0.0, 0.0)


def test_metrics_partial_mention_scenario():
    # retriever found four files, response cites two; one relevant file uncited
    retrieved = {"5138120512", "1466458735"}
    relevant = {"5138120512", "1466458735", "9999999999"}
    precision, recall, f1 = compute_metrics(retrieved, relevant)
    assert precision == 1.0
    assert recall == pytest.approx(2 / 3)
    assert f1 == pytest.approx(0.8)


def test_metrics_against_brute_force_oracle():
    rng = random.Random(23)
    universe = [str(i) for i in range(40)]
    for _ in range(100):
        retrieved = set(rng.sample(universe, rng.randint(0, 12)))
        relevant = set(rng.sample(universe, rng.randint(0, 12)))
        precision, recall, f1 = compute_metrics(retrieved, relevant)
        tp = sum(1 for x in retrieved if x in relevant)
        exp_p = tp / len(retrieved) if retrieved else 0.0
        exp_r = tp / len(relevant) if relevant else 0.0
        exp_f1 = 0.0 if exp_p + exp_r == 0 else 2 * exp_p * exp_r / (exp_p + exp_r)
        assert (precision, recall, f1) == (exp_p, exp_r, exp_f1)


def test_ground_truth_matches_brute_force(seeded_corpus, benchmark_queries):
    for q in benchmark_queries[::7]:
        expected = {
            f.file_id
            for f in seeded_corpus.files.values()
            if f.topic == q.topic and f.file_type in q.target_types
        }
        assert ground_truth(seeded_corpus, q) == expected
        assert len(expected) == 3 * len(q.target_types)


# --- experiment drivers -------------------------------------------------------------

def test_run_experiment_report_consistency(seeded_pipeline, benchmark_queries):
    report = run_experiment(seeded_pipeline, benchmark_queries, language="en")
    assert len(report.per_query) == 110
    for outcome in report.per_query:
        assert set(outcome.retrieved_ids) <= set(seeded_pipeline.corpus.files)
        assert outcome.hit == (outcome.recall > 0)
        assert 0.0 <= outcome.precision <= 1.0
    # aggregates recomputed from rows match reported aggregates
    for name, group in report.groups.items():
        rows = report.per_query if name == "average" else [o for o in report.per_query if o.query_type == name]
        recomputed = aggregate(rows)
        for key in ("precision", "recall", "f1", "hit_rate"):
            assert abs(group[key] - recomputed[key]) < 1e-9


def test_failing_llm_scores_zero():
    corpus = generate_corpus(per_cell=1, seed=3)
    config = AppConfig()
    config.mock.llm_mode = "fail"
    pipeline = build_mock_pipeline(corpus, config)
    queries = generate_queries()[:10]
    report = run_experiment(pipeline, queries)
    assert report.overall["precision"] == 0.0
    assert report.overall["recall"] == 0.0
    assert report.overall["hit_rate"] == 0.0


def test_alpha_sweep_default_grid(seeded_pipeline, benchmark_queries):
    rows = alpha_sweep(seeded_pipeline, benchmark_queries[:12], alphas=[0.0, 0.5, 1.0])
    assert [alpha for alpha, _ in rows] == [0.0, 0.5, 1.0]
    assert len(DEFAULT_ALPHA_GRID) == 11
    assert DEFAULT_ALPHA_GRID[0] == 0.0 and DEFAULT_ALPHA_GRID[-1] == 1.0


def test_run_ablation_rows(seeded_pipeline, benchmark_queries):
    rows = run_ablation(seeded_pipeline, benchmark_queries[:8], language="ko")
    assert [name for name, _ in rows] == ["baseline", "no_translator", "no_router", "no_postprocessors"]
    with pytest.raises(ValueError):
        run_ablation(seeded_pipeline, benchmark_queries[:2], variants=("no_everything",))


def test_larger_final_k_never_decreases_recall(seeded_pipeline, seeded_corpus, benchmark_queries):
    for q in benchmark_queries[:6]:
        relevant = ground_truth(seeded_corpus, q)
        small, _ = seeded_pipeline.query(q.text_en, final_k=3, rerank_top_n=3)
        large, _ = seeded_pipeline.query(q.text_en, final_k=10, rerank_top_n=10)
        _, recall_small, _ = compute_metrics(small.cited_file_ids, relevant)
        _, recall_large, _ = compute_metrics(large.cited_file_ids, relevant)
        assert recall_large >= recall_small


# --- CSV shapes -----------------------------------------------------------------------

def test_csv_shapes(seeded_pipeline, benchmark_queries):
    subset = benchmark_queries[:5]
    report = run_experiment(seeded_pipeline, subset)
    full = report_csv(report)
    lines = full.strip().split("\n")
    assert len(lines) == 6
    assert lines[0].startswith("query_id,query_type,language,topic,target_types,retrieved_ids,relevant_ids")
    assert "translate_ms" in lines[0]
    bare = report_csv(report, include_timings=False)
    assert "translate_ms" not in bare.split("\n")[0]

    summary = summary_csv(report).strip().split("\n")
    assert len(summary) == 5
    assert summary[0].split(",")[0] == "group"

    sweep = sweep_csv([(0.0, report), (1.0, report)]).strip().split("\n")
    assert len(sweep) == 3

    ablation_rows = [("baseline", report), ("no_router", report)]
    ab = ablation_csv(ablation_rows).strip().split("\n")
    assert len(ab) == 3
    assert ab[1].endswith("0.0,0.0,0.0,0.0")  # baseline deltas are zero

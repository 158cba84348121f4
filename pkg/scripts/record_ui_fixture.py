"""Record a mock-backed service fixture for the frontend contract tests.

Spins the FastAPI app in-process over the seeded benchmark corpus and
captures request/response pairs for the three query template shapes plus an
ablation-toggled call, along with the config payload. Output is committed at
frontend/tests/fixtures/service_fixture.json so the UI tests stay hermetic.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from smartsearch.config import AppConfig
from smartsearch.evaluation import build_mock_pipeline, generate_corpus
from smartsearch.server import create_app


def main() -> None:
    corpus = generate_corpus(seed=7)
    pipeline = build_mock_pipeline(corpus, AppConfig())
    client = TestClient(create_app(pipeline.config, pipeline))

    calls = []
    requests = [
        {"query": "Recommend some image files about wildlife"},
        {"query": "Retrieve some image or audio files about wildlife"},
        {"query": "Give me some files about wildlife"},
        {
            "query": "Recommend some image files about wildlife",
            "alpha": 0.5,
            "k": 8,
            "ablation": {"router": False, "postprocessors": True},
        },
        {"query": "추천해줘 몇몇 이미지 파일을 관한 야생동물"},
    ]
    for body in requests:
        response = client.post("/v1/query", json=body)
        response.raise_for_status()
        calls.append({"request": body, "response": response.json()})

    fixture = {"config": client.get("/v1/config").json(), "calls": calls}
    out = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures" / "service_fixture.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixture, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(calls)} calls)")


if __name__ == "__main__":
    main()

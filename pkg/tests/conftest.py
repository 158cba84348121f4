import pytest

from smartsearch.config import AppConfig
from smartsearch.corpus import ArchiveFile, FileType, build_store
from smartsearch.evaluation import build_mock_pipeline, generate_corpus, generate_queries
from smartsearch.providers.mocks import MockEmbedder, MockLLM, MockReranker


def make_file(file_id, file_type=FileType.IMAGE, topic="wildlife", title=None, text="wildlife photograph archive"):
    return ArchiveFile(
        file_id=file_id,
        file_type=file_type,
        topic=topic,
        title=title or f"File {file_id}",
        text_repr=text,
    )


@pytest.fixture
def toy_corpus():
    files = [
        make_file("1001", FileType.IMAGE, "wildlife", text="wildlife photograph morning light savanna wildlife"),
        make_file("1002", FileType.IMAGE, "landscapes", text="landscapes photograph coastal cliffs"),
        make_file("1003", FileType.AUDIO, "wildlife", text="wildlife broadcast dawn chorus field"),
        make_file("1004", FileType.AUDIO, "landscapes", text="landscapes broadcast wind valley"),
        make_file("1005", FileType.VIDEO, "wildlife", text="wildlife reel herd crossing river"),
        make_file("1006", FileType.DOCUMENT, "wildlife", text="wildlife manuscript survey notes annual"),
    ]
    return build_store(files)


@pytest.fixture
def embedder():
    return MockEmbedder(dims=256, seed=0)


@pytest.fixture
def citing_llm():
    return MockLLM("citing_oracle")


@pytest.fixture
def reranker():
    return MockReranker()


@pytest.fixture(scope="session")
def seeded_corpus():
    return generate_corpus(seed=7)


@pytest.fixture(scope="session")
def benchmark_queries():
    return generate_queries()


@pytest.fixture(scope="session")
def seeded_pipeline(seeded_corpus):
    return build_mock_pipeline(seeded_corpus, AppConfig())

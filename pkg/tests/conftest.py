import tempfile
from pathlib import Path

import pytest

from src.kb_model import Knowledge, KnowledgeBase
from src.kb_parser import parse_knowledge_base

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def temp_dir():
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def example1_path() -> Path:
    return FIXTURES / "example1.kb"


@pytest.fixture
def example2_path() -> Path:
    return FIXTURES / "example2.kb"


@pytest.fixture
def three_knowledges_path() -> Path:
    return FIXTURES / "three_knowledges.kb"


@pytest.fixture
def example1_kb(example1_path) -> KnowledgeBase:
    return parse_knowledge_base(example1_path.read_text(encoding="utf-8"))


@pytest.fixture
def example2_kb(example2_path) -> KnowledgeBase:
    return parse_knowledge_base(example2_path.read_text(encoding="utf-8"))


@pytest.fixture
def three_knowledges_kb(three_knowledges_path) -> KnowledgeBase:
    return parse_knowledge_base(three_knowledges_path.read_text(encoding="utf-8"))


@pytest.fixture
def empty_knowledge() -> Knowledge:
    return Knowledge(name="Empty")

from pathlib import Path

import pytest

from cello_eval import mlp

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def wrist_model() -> mlp.MlpModel:
    return mlp.load_path(FIXTURES / "wrist_model.json")


@pytest.fixture(scope="session")
def elbow_model() -> mlp.MlpModel:
    return mlp.load_path(FIXTURES / "elbow_model.json")


@pytest.fixture(scope="session")
def stream_path() -> Path:
    return FIXTURES / "stream.jsonl"

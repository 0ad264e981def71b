import os
import sys
from pathlib import Path

import pytest

BASE_DIR = os.path.dirname(os.path.dirname(__file__))
if BASE_DIR not in sys.path:
    sys.path.insert(0, BASE_DIR)

from cli.spec_loader import load_spec  # noqa: E402
from utils.config import Config, set_config  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: corpus sweeps and deep prefixes")


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts from the built-in defaults, whatever config.yaml or main() set."""
    config = Config()
    set_config(config)
    yield config
    set_config(Config())


@pytest.fixture
def precision() -> int:
    return 128


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def spec_document():
    def load(name: str):
        return load_spec(str(FIXTURES / name))
    return load

import json
import sys
from pathlib import Path

import numpy as np
import pytest

TESTS = Path(__file__).resolve().parent
ROOT = TESTS.parent
sys.path.insert(0, str(TESTS))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def configs():
    return ROOT / "configs"


@pytest.fixture
def golden():
    return TESTS / "golden"


@pytest.fixture
def write_config(tmp_path):
    """Write a scenario dict to a temporary JSON file and return its path."""

    def write(cfg, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(cfg))
        return path

    return write

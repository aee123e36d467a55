import sys
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from expdiff.algebra.scalars import ScalarDomain  # noqa: E402
from expdiff.frontend.eqfile import load_equation_file  # noqa: E402

FIXTURES = ROOT / "fixtures"

settings.register_profile("default", max_examples=100, deadline=None)
settings.register_profile("quick", max_examples=20, deadline=None)
settings.load_profile("default")


@pytest.fixture
def domain():
    return ScalarDomain(("eta",))


@pytest.fixture
def fixture_path():
    def _path(name: str) -> Path:
        return FIXTURES / name
    return _path


@pytest.fixture
def load():
    """Load an equation file from fixtures/ by name."""
    def _load(name: str):
        return load_equation_file(FIXTURES / name)
    return _load

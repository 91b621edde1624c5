import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citerec.evaluation.synthetic import generate_synthetic_corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus10k():
    return generate_synthetic_corpus(10_000, rng_seed=7)


@pytest.fixture(scope="session")
def corpus2k():
    return generate_synthetic_corpus(2_000, rng_seed=3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

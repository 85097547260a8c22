import sys
from pathlib import Path

import pytest

from rotograb import default_geometry

sys.path.insert(0, str(Path(__file__).parent))  # for tests.synth / oracles

FIXTURES = Path(__file__).parent / "fixtures"
REPO_FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def geometry():
    return default_geometry()


@pytest.fixture(scope="session")
def ball_rolling_path():
    return REPO_FIXTURES / "ball_rolling.csv"


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance check."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    label = name.removeprefix("test_").replace("_", " ")
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[{status}] {label}", flush=True)

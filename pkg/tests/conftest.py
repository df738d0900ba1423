import json
from pathlib import Path

import pytest

from citegate.models import RawCitation
from citegate.sources import ScriptedBackend
from citegate.synthetic import build_golden

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
DATA = ROOT / "data"


@pytest.fixture
def fixture_text():
    def read(name):
        return (FIXTURES / name).read_text(encoding="utf-8")
    return read


@pytest.fixture
def fixture_json(fixture_text):
    return lambda name: json.loads(fixture_text(name))


@pytest.fixture(scope="session")
def golden():
    return build_golden()


@pytest.fixture
def golden_citations(golden):
    cases, _ = golden
    return [RawCitation(c.id, "golden", c.text) for c in cases]


@pytest.fixture
def golden_backend(golden):
    return ScriptedBackend(golden[1])


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and (
            report.when == "call" or report.outcome != "passed"):
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        number, _, title = name[len("test_criterion_"):].partition("_")
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {int(number):2d}: {title.replace('_', ' ')}")

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from skosval.rdf import Iri  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance: dict[int, dict] = {}


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def iri():
    return lambda name: Iri(f"urn:x:{name}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        number, title = marker.args
        entry = _acceptance.setdefault(number, {"title": title, "ok": True, "tests": 0})
        entry["tests"] += 1
        entry["ok"] = entry["ok"] and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        entry = _acceptance[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"AC{number} {status}  {entry['title']}")

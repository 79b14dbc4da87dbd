from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
WEAKNESS_SUITE = FIXTURES / "weakness_suite"
CORPUS = FIXTURES / "corpus"
CORPUS_TRUTH = FIXTURES / "corpus_truth.csv"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str):
    """Parse one bundled manifest by file name."""
    from pupsec.parser import parse_manifest

    path = WEAKNESS_SUITE / name
    return parse_manifest(path.read_text(encoding="utf-8"), str(path))


_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_results.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results:
        status = "PASS" if outcome == "PASSED" else outcome
        terminalreporter.write_line(f"{name}: {status}")

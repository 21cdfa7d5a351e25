import pytest

import logkelly as lk
from helpers import COIN_FLIP

_acceptance = []


@pytest.fixture
def coin_flip():
    return lk.from_atoms(COIN_FLIP)


@pytest.fixture
def write_dist(tmp_path):
    """Write atoms (or raw text) to a distribution file and return its path."""
    counter = iter(range(10**6))

    def _write(atoms_or_text):
        path = tmp_path / f"dist{next(counter)}.csv"
        if isinstance(atoms_or_text, str):
            path.write_text(atoms_or_text, encoding="utf-8")
        else:
            rows = ["value,probability"] + [f"{x!r},{p!r}" for x, p in atoms_or_text]
            path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _acceptance.append((number, title, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(_acceptance):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {number:>2}: {title} ({duration:.2f}s)")

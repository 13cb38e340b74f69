import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vhdsim.madm import CriterionSpec, DecisionMatrix, Direction  # noqa: E402

# Worked voice example: delay, bandwidth, cost, jitter for six candidates.
VOICE_IDS = ["A1", "A2", "A3", "A4", "A5", "A6"]
VOICE_D = [
    [0.00062, 8, 9, 0.411],
    [0.00063, 1.5, 8, 0.762],
    [0.00062, 15, 12, 0.057],
    [0.00063, 7, 6, 0.939],
    [0.00062, 11, 10, 0.103],
    [0.00061, 1, 9, 0.247],
]
VOICE_W = [0.3, 0.2, 0.2, 0.3]


@pytest.fixture
def voice_matrix():
    return DecisionMatrix(VOICE_IDS, VOICE_D)


@pytest.fixture
def voice_topsis_specs():
    # benefit set {X1, X2, X4}, cost set {X3}, as implied by the printed ideals
    dirs = [Direction.BENEFIT, Direction.BENEFIT, Direction.COST, Direction.BENEFIT]
    return [CriterionSpec(f"X{j+1}", d, w) for j, (d, w) in enumerate(zip(dirs, VOICE_W))]


_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for mark_name, label in getattr(report, "user_properties", []):
        if mark_name == "acceptance":
            _acceptance_results.append((label, "PASS" if report.passed else "FAIL"))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is not None and ("acceptance", marker.args[0]) not in item.user_properties:
        item.user_properties.append(("acceptance", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _acceptance_results:
        terminalreporter.write_line(f"{status}  {label}")

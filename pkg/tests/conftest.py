import sys

import pytest

from vertexplace.topology import Topology


@pytest.fixture
def path3():
    return Topology.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return Topology.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star4():
    return Topology.from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def cycle4():
    return Topology.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria (slow)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")

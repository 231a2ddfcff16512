import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kfactor.graph_core import BicoloredGraph  # noqa: E402


@pytest.fixture
def alt4():
    """Alternating 4-cycle: red (0,1),(2,3); blue (1,2),(0,3)."""
    return BicoloredGraph.from_sets(4, 1, [(0, 1), (2, 3)], [(1, 2), (0, 3)])


@pytest.fixture
def path4():
    """Red (0,1),(2,3) joined by one blue edge (1,2)."""
    return BicoloredGraph.from_sets(4, 1, [(0, 1), (2, 3)], [(1, 2)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        name, ok, detail = results[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] #{num:>2} {name}: {detail}")

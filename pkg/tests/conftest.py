from __future__ import annotations

import pytest

from designcoded.designs import Design


@pytest.fixture
def fano() -> Design:
    """The (7,3,1) plane with the block list used in the worked examples."""
    return Design.build(range(1, 8), [(1, 2, 7), (1, 4, 5), (1, 3, 6), (4, 6, 7), (2, 5, 6),
                                      (3, 5, 7), (2, 3, 4)], 2, 3, 1)


@pytest.fixture
def td43() -> Design:
    blocks = [(1, 4, 7, 10), (1, 5, 8, 11), (1, 6, 9, 12), (2, 4, 9, 11), (2, 5, 7, 12),
              (2, 6, 8, 10), (3, 4, 8, 12), (3, 5, 9, 10), (3, 6, 7, 11)]
    groups = [(1, 2, 3), (4, 5, 6), (7, 8, 9), (10, 11, 12)]
    return Design.build(range(1, 13), blocks, 2, 4, 1, groups=groups)


STEINER_8_BLOCKS = ["1256", "3478", "1357", "2468", "1458", "2367", "1234", "5678", "1278",
                    "3456", "1368", "2457", "1467", "2358"]


@pytest.fixture
def steiner8() -> Design:
    return Design.build(range(1, 9), [tuple(int(c) for c in b) for b in STEINER_8_BLOCKS], 3, 4, 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from ismt.graph import Instance, MetricGraph

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def sym(n: int, weights: dict[tuple[int, int], float]) -> MetricGraph:
    w = np.zeros((n, n))
    for (a, b), x in weights.items():
        w[a, b] = w[b, a] = x
    return MetricGraph(w)


def k_unit(n: int) -> MetricGraph:
    return MetricGraph(np.ones((n, n)) - np.eye(n))


def star_metric() -> MetricGraph:
    # hub 3 at distance 1 from 0, 1, 2; those three pairwise at distance 2
    return sym(4, {(0, 1): 2, (0, 2): 2, (1, 2): 2, (0, 3): 1, (1, 3): 1, (2, 3): 1})


@pytest.fixture
def inst_a() -> Instance:
    return Instance(k_unit(4), {0, 1}, "A")


@pytest.fixture
def inst_b() -> Instance:
    return Instance(sym(3, {(0, 1): 1, (0, 2): 2, (1, 2): 2}), {0}, "B")


@pytest.fixture
def inst_c() -> Instance:
    g = sym(4, {(0, 1): 2, (0, 2): 1, (0, 3): 2, (1, 2): 2, (1, 3): 3, (2, 3): 1})
    return Instance(g, {1, 2}, "C")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")

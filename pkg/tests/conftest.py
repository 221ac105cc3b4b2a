import random

import pytest
from hypothesis import strategies as st

from partition_vc import PartitionFamily


@st.composite
def families(draw, max_m=5, max_k=10, min_k=1):
    m = draw(st.integers(1, max_m))
    k = draw(st.integers(min_k, max_k))
    pairs = []
    for _ in range(k):
        digits = draw(st.lists(st.integers(0, 2), min_size=m, max_size=m))
        a = sum(1 << j for j, d in enumerate(digits) if d == 1)
        b = sum(1 << j for j, d in enumerate(digits) if d == 2)
        pairs.append((a, b))
    return PartitionFamily.from_masks(m, pairs)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)

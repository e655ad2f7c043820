import sys

import numpy as np
import pytest


def interior_points(box, count, seed=0, pad=0.1):
    """Uniform points in ``box`` shrunk by ``pad`` of each side's width."""
    rng = np.random.default_rng(seed)
    box = np.asarray(box, dtype=float)
    w = box[:, 1] - box[:, 0]
    return rng.uniform(box[:, 0] + pad * w, box[:, 1] - pad * w, size=(count, len(box)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

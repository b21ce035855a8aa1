import math

import numpy as np
import pytest
from hypothesis import settings

from dirtymac.core import ChannelParams

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

FIG3 = ChannelParams(5.0, 5.0, 12.0)
FIG4 = ChannelParams(2.5, 5.0, 12.0)


def bits(x):
    return x / math.log(2.0)


def brute_f(params, delta, n=200_001):
    """Dense-grid oracle for f(delta) in bits, written from the definition."""
    p1, p2, q = params.as_tuple()
    rho = np.linspace(-1.0 + 1e-9, 0.0, n)
    c = p1 + q + 2 * rho * math.sqrt(p1 * q)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = 0.5 * (np.log2((1 + p2 + c) / (delta + c)) + np.log2((delta + (1 - rho**2) * p1) / (1 + p2)))
    v = np.where(np.isnan(v), -np.inf, v)
    return float(v.max())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = {}


def record(criterion, ok, detail):
    """Store one summary line per acceptance criterion for the terminal report."""
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

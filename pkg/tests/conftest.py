import math

import numpy as np
import pytest
from hypothesis import strategies as st

from spherecasimir import SphereGeometry

ACCEPTANCE_LINES: list[str] = []


def log_uniform(lo: float, hi: float):
    return st.floats(math.log(lo), math.log(hi)).map(math.exp)


@st.composite
def geometries(draw, lmin: float = 1e-3, lmax: float = 10.0):
    """Random sphere pairs; L is drawn relative to the smaller radius."""
    R1 = draw(log_uniform(0.05, 20.0))
    R2 = draw(log_uniform(0.05, 20.0))
    L = draw(log_uniform(lmin, lmax)) * min(R1, R2)
    return SphereGeometry(R1, R2, L)


def random_geometries(rng: np.random.Generator, n: int, lmin: float = 1e-2, lmax: float = 10.0):
    R1 = np.exp(rng.uniform(np.log(0.05), np.log(20.0), n))
    R2 = np.exp(rng.uniform(np.log(0.05), np.log(20.0), n))
    L = np.exp(rng.uniform(np.log(lmin), np.log(lmax), n)) * np.minimum(R1, R2)
    return [SphereGeometry(float(a), float(b), float(c)) for a, b, c in zip(R1, R2, L)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

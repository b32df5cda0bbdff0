import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp


def rotation(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def random_gl(rng, d, cond_max=1e3):
    while True:
        A = rng.standard_normal((d, d))
        if np.linalg.cond(A) < cond_max:
            return A


def well_conditioned(A, cond_max=1e4):
    return np.all(np.isfinite(A)) and np.linalg.cond(A) < cond_max


def matrices(d):
    return hnp.arrays(np.float64, (d, d), elements=st.floats(-2, 2, allow_nan=False, width=64))


DIAGONAL = [np.diag([0.4, 0.2]), np.diag([0.3, 0.1]), np.diag([0.25, 0.15])]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":").lstrip("C"))):
            terminalreporter.write_line(line)

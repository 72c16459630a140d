import numpy as np
import pytest

from mimo_islr.model import AngleScenario

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    print(line)
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_waveform(rng, mt, n, kind="unimodular"):
    """Random feasible test matrix: unit modulus, or energy Mt*N with mild amplitude spread."""
    s = np.exp(1j * rng.uniform(-np.pi, np.pi, size=(mt, n)))
    if kind == "unimodular":
        return s
    s = s * rng.uniform(0.8, 1.2, size=(mt, n))
    return s * np.sqrt(mt * n / np.vdot(s, s).real)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def scenario_4x16():
    return AngleScenario.default_scene(4, 16)

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Append one PASS/FAIL line; shown in the terminal summary."""

    def _record(number, ok, detail):
        line = f"criterion {number:>2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def north(d):
    p = np.zeros(d + 1)
    p[-1] = 1.0
    return p


def symmetric_set(half, d, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((half, d + 1))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return np.vstack([X, -X])

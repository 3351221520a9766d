import numpy as np
import pytest

from noisy_indicators import ReferenceSet, SolutionSet

_ACCEPTANCE: list[str] = []


def record_acceptance(number: int, name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    _ACCEPTANCE.append(f"[{status}] criterion {number}: {name}" + (f" -- {detail}" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


def random_front(rng, m, D=2):
    """``m`` mutually non-dominated points on the positive unit sphere."""
    x = np.abs(rng.normal(size=(m, D))) + 1e-3
    return ReferenceSet(1.0 - x / np.linalg.norm(x, axis=1, keepdims=True))


def random_solution_set(rng, n=None, D=2, eta=0.1):
    n = n or int(rng.integers(2, 15))
    t = rng.uniform(0, 1, (n, D))
    r = t + rng.uniform(-eta, eta, (n, D)) if eta else t
    return SolutionSet(t, r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

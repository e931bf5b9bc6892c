import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("g2lab", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("g2lab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` records and prints one acceptance line."""

    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cntheta.hpc import PrecisionContext  # noqa: E402


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(128)


@pytest.fixture(scope="session")
def ctx192():
    return PrecisionContext(192)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load cached) numba kernels once so timings measure arithmetic."""
    from cntheta.lvalue import central_lvalue
    from cntheta.tunnell import count_reps

    central_lvalue(1, PrecisionContext(128))
    count_reps(1, (1, 1, 1))


# one summary line per acceptance criterion
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE[number] = (ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")

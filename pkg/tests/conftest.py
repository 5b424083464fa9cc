import os

import pytest

from xijensen.scan import GammaProvider

# acceptance results recorded by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def provider():
    """Shared in-memory gamma oracle values (computed once per (n, digits))."""
    return GammaProvider(cache=None, threads=int(os.environ.get("XIJENSEN_TEST_THREADS", "1")))


@pytest.fixture(scope="session")
def gammas50(provider):
    return provider.table(range(0, 217), 50)


@pytest.fixture
def record():
    def _record(number: int, ok: bool, detail: str):
        ACCEPTANCE[number] = (bool(ok), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, 11):
        if k not in ACCEPTANCE:
            terminalreporter.write_line(f"criterion {k:2d}: NOT RUN  (deselected, or errored before recording)")
            continue
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

import pytest
from hypothesis import settings

from brpic.modular import load_fixtures

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixtures():
    return load_fixtures()


_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance check; the summary prints a line per criterion."""
    def record(number, ok, detail=""):
        _ACCEPTANCE.setdefault(number, []).append((request.node.name, bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        parts = _ACCEPTANCE.get(n)
        if not parts:
            terminalreporter.write_line(f"criterion {n}: FAIL (not run)")
            continue
        ok = all(p[1] for p in parts)
        detail = "; ".join(p[2] for p in parts if p[2])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

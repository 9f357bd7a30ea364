import pytest

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Record one acceptance line; call with the criterion id, outcome and detail."""

    def _record(name: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")

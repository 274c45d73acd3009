import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# filled by tests/test_acceptance.py, one (label, ok, detail) per criterion
GATE = []


def pytest_terminal_summary(terminalreporter):
    if not GATE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(GATE, key=lambda r: int(r[0].split()[1])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")


@pytest.fixture
def gate():
    def record(label, ok, detail):
        GATE.append((label, bool(ok), detail))
        return ok
    return record

import time

import pytest

ACCEPTANCE_LINES: list[str] = []


class Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.start = time.perf_counter()

    def finish(self, ok: bool, detail: str = "") -> None:
        elapsed = time.perf_counter() - self.start
        within = elapsed < self.limit
        status = "PASS" if ok and within else "FAIL"
        line = f"criterion {self.number:2d} {status}  {self.title}  ({elapsed:.1f}s / limit {self.limit:g}s) {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {self.limit:g}s"


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

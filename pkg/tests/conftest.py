import time
from pathlib import Path

import pytest

from idlogic.parser import parse_theory
from idlogic.structures import parse_structure

CORPUS = Path(__file__).resolve().parents[1] / "src" / "idlogic" / "corpus"


def corpus(name: str) -> str:
    return (CORPUS / name).read_text()


@pytest.fixture
def load():
    def _load(theory: str, structure: str | None = None):
        t = parse_theory(corpus(theory))
        if structure is None:
            return t
        return t, parse_structure(corpus(structure)).check_vocabulary(t.vocabulary)

    return _load


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE: dict = {}


class Criterion:
    """Times a block, records PASS/FAIL for criterion ``number`` and prints one line."""

    def __init__(self, number: int, title: str, budget: float | None = None):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def _record(self, ok: bool, note: str) -> None:
        elapsed = time.perf_counter() - self.start
        line = f"{'PASS' if ok else 'FAIL'} criterion {self.number:2d}: {self.title} ({elapsed:.2f}s{note})"
        ACCEPTANCE[self.number] = (ok, line, elapsed)
        print(line)

    def __exit__(self, kind, exc, tb):
        if exc is not None:
            self._record(False, f"; {kind.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            return False
        elapsed = time.perf_counter() - self.start
        if self.budget is not None and elapsed > self.budget:
            self._record(False, f"; over the {self.budget:g}s budget")
            raise AssertionError(f"criterion {self.number} took {elapsed:.2f}s, budget {self.budget:g}s")
        self._record(True, "")
        return False


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number][1])

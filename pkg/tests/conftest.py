import random
from fractions import Fraction

import pytest

from inscribable.exactalg import FieldSpec

ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:2d}: {status}  {detail}".rstrip()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def Q_():
    return FieldSpec.rational()


@pytest.fixture
def rng():
    return random.Random(20240611)


def rand_frac(r: random.Random, lo=-5, hi=5, den=4) -> Fraction:
    return Fraction(r.randint(lo * den, hi * den), r.randint(1, den))

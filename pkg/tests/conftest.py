from fractions import Fraction

import pytest

from curvature_locus.net_model import NetOfQuadrics
from curvature_locus.surd import format_number


def exact_dirs(lines):
    """Multiset of (direction strings, multiplicity) for exact real lines."""
    return sorted((tuple(format_number(c) for c in l.direction), l.multiplicity) for l in lines)


@pytest.fixture
def net_type5():
    return NetOfQuadrics.parse("2*x*y", "2*x*z", "z^2")


@pytest.fixture
def net_type6():
    return NetOfQuadrics.parse("x^2", "2*x*y", "y^2+2*x*z")


@pytest.fixture
def net_steiner():
    return NetOfQuadrics.parse("x*y", "x*z", "y*z")


@pytest.fixture
def net_cyclic():
    return NetOfQuadrics.parse("x^2+y*z", "y^2+x*z", "z^2+x*y")


@pytest.fixture
def net_half():
    return NetOfQuadrics.parse("x^2/2-y^2/2", "x*z", "y*z")


HALF = Fraction(1, 2)


ACCEPTANCE_LINES = []


class record:
    """Context manager that logs one PASS/FAIL line for an acceptance check."""

    def __init__(self, key, text):
        self.key, self.text = key, text

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        line = f"{self.key} {status}  {self.text}"
        if exc is not None:
            line += f"  ({str(exc).splitlines()[0][:160] if str(exc) else exc_type.__name__})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return False


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

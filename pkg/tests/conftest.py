from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from numgroups._backend import qq
from numgroups.exactfield import quadratic_field, rational_field
from numgroups.fricke import hecke_value

QUADRATIC_DS = (-1, -2, -3, -5, -7, -11, 2, 3, 5, 13, -19, 6)


def builtin_fields():
    fields = [rational_field()] + [quadratic_field(d) for d in QUADRATIC_DS]
    fields.append(hecke_value(7).field)
    return fields


@pytest.fixture(params=builtin_fields(), ids=lambda K: K.name)
def field(request):
    return request.param


def rationals(max_num: int = 12, max_den: int = 6):
    return st.builds(
        lambda p, q: qq(Fraction(p, q)),
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


def elements(K, max_num: int = 12, max_den: int = 6):
    return st.lists(rationals(max_num, max_den), min_size=K.degree, max_size=K.degree).map(K.element)


def integral_elements(K, bound: int = 6):
    """Random elements of O_K via integral-basis coordinates."""
    return st.lists(st.integers(-bound, bound), min_size=K.degree, max_size=K.degree).map(K.from_ok_coords)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion; use as a context manager."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    class Recorder:
        def __init__(self):
            self.detail = ""

        def __call__(self, number: int, title: str):
            self.number, self.title = number, title
            return self

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            line = f"[{status}] criterion {self.number}: {self.title}" + (f" ({self.detail})" if self.detail else "")
            lines.append(line)
            print(line)
            return False

    return Recorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)

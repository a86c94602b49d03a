import sys
import time

import pytest

from heckecrit._arith import digits
from heckecrit.characters import InfinityType, enumerate_characters, find_smallest_character
from heckecrit.field_tower import GaloisClosure, build_tower, desk_tower

ZETA8_TOWER = "x^8+6*x^4+1"          # over k = Q(ζ8), k0 = Q(√2): n = 2, r = 2


@pytest.fixture(autouse=True)
def working_precision():
    """Test-side ball arithmetic at 60 digits; library code sets its own precision."""
    with digits(60):
        yield


@pytest.fixture(scope="session")
def desk():
    return desk_tower(50)


@pytest.fixture(scope="session")
def desk100():
    return desk_tower(100)


@pytest.fixture(scope="session")
def desk_closure(desk):
    return GaloisClosure(desk)


@pytest.fixture(scope="session")
def desk_char(desk):
    return find_smallest_character(desk, precision_digits=50)


@pytest.fixture(scope="session")
def gaussian():
    return build_tower("x^2+1", precision_digits=50)


@pytest.fixture(scope="session")
def gaussian_trivial(gaussian):
    return enumerate_characters(gaussian, InfinityType((0, 0), 1, 1))[0]


@pytest.fixture(scope="session")
def zeta8():
    return build_tower(ZETA8_TOWER, precision_digits=50)


@pytest.fixture(scope="session")
def desk_quotient_timed(desk_char):
    """The 50-digit main quotient of the desk character and its cost in seconds; about a minute."""
    from heckecrit.certifier import main_quotient
    t0 = time.perf_counter()
    t = main_quotient(desk_char, precision=50)
    return t, time.perf_counter() - t0


@pytest.fixture(scope="session")
def desk_quotient(desk_quotient_timed):
    return desk_quotient_timed[0]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import random
from fractions import Fraction
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def rng():
    return random.Random(20240517)


def F(x):
    return Fraction(x)


# acceptance criteria register a one-line outcome here; the lines are
# printed in the terminal summary so they survive output capturing
ACCEPTANCE = {}
SUITE_BUDGET = 300.0
_START = []


def record(number, ok, detail):
    ACCEPTANCE[number] = (bool(ok), detail)


def pytest_sessionstart(session):
    import time
    _START.append(time.perf_counter())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time
    if not ACCEPTANCE:
        return
    elapsed = time.perf_counter() - _START[0]
    if 10 in ACCEPTANCE:
        ok, detail = ACCEPTANCE[10]
        within = elapsed <= SUITE_BUDGET
        ACCEPTANCE[10] = (ok and within, "%s; suite wall time %.1f s (budget %.0f s)" % (detail, elapsed, SUITE_BUDGET))
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line("criterion %2d %s  %s" % (n, "PASS" if ok else "FAIL", detail))


def pytest_sessionfinish(session, exitstatus):
    import time
    if _START and ACCEPTANCE and time.perf_counter() - _START[0] > SUITE_BUDGET and exitstatus == 0:
        session.exitstatus = 1

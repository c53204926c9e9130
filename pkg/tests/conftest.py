import pytest

from lr_abundant.chebyshev import SieveTables
from lr_abundant.constants import compute_w1
from lr_abundant.lr_engine import Engine
from lr_abundant.primes import sieve


@pytest.fixture(scope="session")
def big_primes():
    return sieve(10 ** 7)


@pytest.fixture(scope="session")
def tables(big_primes):
    return SieveTables(10 ** 7, big_primes)


@pytest.fixture(scope="session")
def small_tables():
    return SieveTables(200_000)


@pytest.fixture(scope="session")
def w1(big_primes):
    return compute_w1(10 ** 7, big_primes)


@pytest.fixture(scope="session")
def states_upto_1000():
    """Snapshots of the LR state for m = 1..1000 (index m - 1)."""
    engine = Engine()
    return [s.snapshot() for s in engine.states(1000)]


_ACCEPTANCE = []


def record_criterion(name, passed, detail=""):
    _ACCEPTANCE.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")

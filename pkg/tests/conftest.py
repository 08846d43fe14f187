import pytest

from wmcabs.fixtures import scenario
from wmcabs.logic import Literal, Theory, atom, propositional_vocabulary
from wmcabs.wmc import WeightFn


def prop_theory(names, sentences=()):
    return Theory(propositional_vocabulary(names), tuple(sentences))


def weights(table, default="one"):
    """``{"a": (pos, neg)}`` or ``{"a": pos}`` to a WeightFn over 0-ary atoms."""
    out = {}
    for name, w in table.items():
        if isinstance(w, tuple):
            out[Literal(atom(name), True)], out[Literal(atom(name), False)] = w
        else:
            out[Literal(atom(name), True)] = w
    return WeightFn(out, default)


@pytest.fixture(scope="session")
def university():
    return scenario("university")


@pytest.fixture(scope="session")
def courses():
    return scenario("courses")


@pytest.fixture(scope="session")
def pq():
    return scenario("pq")


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {n}: {text}")

import random

import pytest

from wmcabs.properties import SUITES, ProbabilityTable, SuiteResult, run_suites
from wmcabs.random_instances import random_theory, random_weights, vocabulary
from wmcabs.wmc import probability

SOUND_SUITES = sorted(set(SUITES) - {"literal-match"})


@pytest.mark.parametrize("name", SOUND_SUITES)
def test_suite_passes_small(name):
    (r,) = run_suites(seed=1, cases=30, names=[name])
    assert r.cases == 30
    assert r.passed, r.summary()


def test_literal_match_suite_finds_counterexamples():
    # literal-level agreement does not carry over to whole models
    (r,) = run_suites(seed=1, cases=60, names=["literal-match"])
    assert not r.passed
    assert "weak exactness fails" in r.failures[0]


def test_suites_are_seeded():
    a = run_suites(seed=5, cases=20, names=["literal-match"])[0]
    b = run_suites(seed=5, cases=20, names=["literal-match"])[0]
    assert a.failures == b.failures


def test_probability_table_matches_counter():
    rng = random.Random(12)
    v = vocabulary(5, "a")
    for _ in range(30):
        t = random_theory(rng, v, max_clauses=rng.randint(1, 3))
        w = random_weights(rng, t.universe)
        table = ProbabilityTable(t, w)
        for x in t.universe:
            assert table.pr(x) == probability(x, t, w)


def test_summary_text():
    r = SuiteResult("demo", cases=3)
    assert r.summary() == "PASS demo: 3 cases, 0 failures"
    r.fail("case 2")
    assert r.summary() == "FAIL demo: 3 cases, 1 failures; first: case 2"

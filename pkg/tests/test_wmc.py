import random
import time
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmcabs.errors import WeightError, ZeroEvidenceError, ZeroPartitionError
from wmcabs.logic import FALSE, TRUE, And, Literal, Model, Not, Or, Universe, assignments, atom, evaluate
from wmcabs.random_instances import decomposable_cnf, random_cnf, random_weights
from wmcabs.syntax import parse_formula
from wmcabs.wmc import (
    COMPLEMENT, UNWEIGHTED, WeightFn, conditional, model_weight, partition, probability, wmc,
)

from conftest import prop_theory, weights

a, b = atom("a"), atom("b")
W = weights({"a": (F(3, 5), F(2, 5)), "b": (F(1, 2), F(1, 2))})
AB = prop_theory("ab", [Or((a, b))])


def brute_wmc(theory, w, extra=None):
    """Definitional sum, independent of both counters."""
    total = F(0)
    for m in assignments(theory.universe):
        if all(evaluate(m, s) for s in theory.sentences) and (extra is None or evaluate(m, extra)):
            prod = F(1)
            for lit in m.literals():
                prod *= w(lit)
            total += prod
    return total


@pytest.mark.parametrize("method", ["dpll", "enumerate"])
def test_wmc_examples(method):
    assert wmc(AB, W, method=method) == F(4, 5)
    assert wmc(AB, UNWEIGHTED, method=method) == 3
    assert wmc(prop_theory("ab", [FALSE]), W, method=method) == 0


@pytest.mark.parametrize("method", ["dpll", "enumerate"])
def test_probability_examples(method):
    assert probability(a, AB, W, method=method) == F(3, 4)
    assert probability(TRUE, AB, W, method=method) == 1
    assert conditional(a, b, AB, W, method=method) == F(3, 5)
    assert conditional(a, TRUE, AB, W, method=method) == probability(a, AB, W, method=method)


def test_model_weight():
    u = Universe([a, b])
    assert model_weight(Model(u, [True, False]), W) == F(3, 10)
    assert model_weight(Model(u, [True, False]), UNWEIGHTED) == 1
    zero = weights({"a": (0, 1)})
    assert model_weight(Model(u, [True, True]), zero) == 0


def test_zero_partition_and_zero_evidence():
    with pytest.raises(ZeroPartitionError):
        probability(a, prop_theory("a", [FALSE]), UNWEIGHTED)
    with pytest.raises(ZeroPartitionError):
        probability(a, prop_theory("a", [a]), weights({"a": (0, 1)}))
    with pytest.raises(ZeroEvidenceError):
        conditional(a, And((b, Not(b))), AB, W)


def test_complement_default():
    w = weights({"a": F(3, 10)}, COMPLEMENT)
    assert w.pair(a) == (F(3, 10), F(7, 10))
    assert w.pair(b) == (1, 1)
    with pytest.raises(WeightError):
        weights({"a": F(13, 10)}, COMPLEMENT)
    # above one is fine without the complement default
    assert weights({"a": 3}).pair(a) == (3, 1)
    with pytest.raises(WeightError):
        weights({"a": -1})


def test_decimal_weights_are_exact():
    w = WeightFn({Literal(a): "0.25"})
    assert w(Literal(a)) == F(1, 4)


def test_float_mode():
    wf = W.to_float()
    assert abs(wmc(AB, wf) - 0.8) < 1e-9
    assert abs(probability(a, AB, wf) - 0.75) < 1e-9
    assert abs(wmc(AB, wf, method="enumerate") - 0.8) < 1e-9


def test_university_values(university):
    assert probability(parse_formula("diff(B,E)"), university.low, university.wl) == F(7, 10)
    e = parse_formula("takes(A,B) & iq(A,L) & diff(B,E)")
    assert conditional(parse_formula("grades(A,B,7)"), e, university.low, university.wl) == F(1, 4)


def test_university_partition(university):
    # frozen from the enumeration counter
    assert partition(university.low, university.wl) == 4
    assert wmc(university.low, university.wl, method="enumerate", cap=25) == 4


def test_unweighted_count_equals_models():
    from wmcabs.reasoning import all_models

    rng = random.Random(3)
    for _ in range(50):
        t = random_cnf(rng, 6, rng.randint(0, 6))
        assert wmc(t, UNWEIGHTED) == len(list(all_models(t)))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dpll_matches_definition(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    t = random_cnf(rng, n, rng.randint(0, 2 * n))
    w = random_weights(rng, t.universe, zeros=0.1)
    expected = brute_wmc(t, w)
    assert wmc(t, w) == expected
    assert wmc(t, w, method="enumerate") == expected


def test_dpll_matches_enumeration_up_to_twenty_atoms():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(10, 20)
        t = random_cnf(rng, n, rng.randint(n // 2, 2 * n))
        w = random_weights(rng, t.universe)
        assert wmc(t, w) == wmc(t, w, method="enumerate")


def test_decomposable_forty_atoms_fast():
    t = decomposable_cnf(random.Random(5))
    assert len(t.universe) == 40
    w = random_weights(random.Random(6), t.universe)
    start = time.perf_counter()
    z = wmc(t, w)
    assert time.perf_counter() - start < 10
    # product of component counts, each checked by enumeration
    from wmcabs.derivation import decompose
    from wmcabs.logic import Theory, atoms_of, propositional_vocabulary

    expected = F(1)
    covered = set()
    for comp in decompose(t):
        names = sorted({x.predicate for s in comp.sentences for x in atoms_of(s)})
        covered |= set(names)
        sub = Theory(propositional_vocabulary(names), comp.sentences)
        expected *= wmc(sub, w, method="enumerate")
    for x in t.universe:
        if x.predicate not in covered:
            expected *= sum(w.pair(x))
    assert z == expected

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmcabs.checker import (
    CLASSES, EXACT, FAST, FAILS, HOLDS, SKIPPED, AbstractionReport, Verdict, check_complete,
    check_sound, check_weak_exact, check_weighted_complete, check_weighted_exact,
    check_weighted_sound, classify, literal_prob_match, sufficient_complete, sufficient_sound,
)
from wmcabs.documents import parse_mapping_text, parse_theory_text
from wmcabs.errors import NonSeparableError, ZeroPartitionError
from wmcabs.fixtures import scenario
from wmcabs.logic import (
    Iff, Literal, Not, Or, assignments, atom, model_formula, propositional_vocabulary,
)
from wmcabs.mapping import RefinementMapping
from wmcabs.random_instances import models, profiles, random_abstraction
from wmcabs.syntax import parse_formula
from wmcabs.wmc import UNWEIGHTED, WeightFn, probability

from conftest import prop_theory, weights

P = parse_formula


def identity_args(theory, w):
    return theory, w, theory, w, RefinementMapping.identity(theory.vocabulary)


def statuses(report):
    return {k: v.status for k, v in report.verdicts.items()}


# ---------------------------------------------------------------------------
# the bundled scenarios

def test_university_all_hold(university):
    r = classify(*university.args())
    assert statuses(r) == {c: HOLDS for c in CLASSES}
    assert r.separable and r.fast_path_used
    assert r["sound"].path == FAST
    # completeness and weak exactness are always confirmed exhaustively
    assert r["complete"].path == EXACT and r["weakExact"].path == EXACT


def test_university_fast_paths(university):
    h, wh, l, wl, m = university.args()
    assert sufficient_sound(h, l, m)
    assert sufficient_complete(h, l, m)
    assert literal_prob_match(h, wh, l, wl, m)


def test_university_perturbed_weight_breaks_literal_match(university):
    h, wh, l, wl, m = university.args()
    bumped = WeightFn(dict(wh.explicit) | {Literal(P("diff(B,E)")): F(3, 5)}, wh.default)
    assert not literal_prob_match(h, bumped, l, wl, m)
    assert check_weak_exact(h, bumped, l, wl, m).fails


def test_courses_unsound_with_witness(courses):
    r = classify(*courses.args())
    v = r["sound"]
    assert v.fails and v.witness.kind == "low_model"
    assert "CS(B)" in v.witness.literals
    assert "~Fieldwork(B)" in v.witness.literals
    assert r["weightedSound"].fails and r["weightedExact"].fails


def test_incomplete_variant():
    s = scenario("university_nodiff")
    r = classify(*s.args())
    v = r["complete"]
    assert v.fails and v.witness.kind == "high_model"
    assert "grades(A,B,G)" in v.witness.literals
    assert "iq(A,L)" in v.witness.literals and "takes(A,B)" in v.witness.literals
    assert r["weightedComplete"].fails and r["weightedExact"].fails
    # the high-level theory gives the good grade positive probability
    phi = P("iq(A,L) & takes(A,B) & grades(A,B,G)")
    assert probability(phi, s.high, s.wh) > 0
    assert probability(s.mapping.apply(phi), s.low, s.wl) == 0
    with pytest.raises(NonSeparableError):
        sufficient_complete(s.high, s.low, s.mapping)


def test_forced_grade_variant():
    s = scenario("university_forced")
    r = classify(*s.args())
    assert r["weightedSound"].fails
    phi = P("iq(A,L) & diff(B,E) & takes(A,B) & grades(A,B,O)")
    assert probability(phi, s.high, s.wh) == 0
    assert probability(s.mapping.apply(phi), s.low, s.wl) > 0


def test_pq_construction(pq):
    r = classify(*pq.args())
    assert r["weakExact"].holds
    assert r["complete"].fails and r["complete"].witness.literals == ("s", "r", "p", "q")
    assert r["weightedExact"].fails
    # m(p) is valid and m(q) unsatisfiable, so Dl entails m(p | q): sound holds
    assert r["sound"].holds


def test_identity_abstractions_hold():
    a, b = atom("a"), atom("b")
    t = prop_theory("ab", [Or((a, b))])
    w = weights({"a": (F(3, 5), F(2, 5))})
    r = classify(*identity_args(t, w))
    assert statuses(r) == {c: HOLDS for c in CLASSES}
    assert check_sound(t, t, RefinementMapping.identity(t.vocabulary)).holds
    assert sufficient_sound(prop_theory("ab"), t, RefinementMapping.identity(t.vocabulary))


def test_report_invariants_hold_on_random_instances():
    rng = random.Random(4)
    for _ in range(150):
        inst = random_abstraction(rng, zeros=0.1)
        r = classify(*inst.args())
        assert r.invariant_violations() == []


def test_invariant_violation_detected():
    bad = AbstractionReport({c: Verdict(HOLDS) for c in CLASSES} | {"sound": Verdict(FAILS)},
                            separable=True)
    assert bad.invariant_violations()


# ---------------------------------------------------------------------------
# the fast paths are not trusted for positive verdicts

def test_literal_match_does_not_imply_weak_exact():
    # high: p <-> q, uniform; low: two independent fair atoms
    hv = propositional_vocabulary("pq")
    high = prop_theory("pq", [Iff(atom("p"), atom("q"))])
    low = prop_theory("ab")
    m = RefinementMapping(hv, low.vocabulary, {atom("p"): atom("a"), atom("q"): atom("b")})
    assert m.is_separable()
    assert literal_prob_match(high, UNWEIGHTED, low, UNWEIGHTED, m)
    v = check_weak_exact(high, UNWEIGHTED, low, UNWEIGHTED, m)
    assert v.fails
    assert (v.witness.high_probability, v.witness.low_probability) == (F(1, 2), F(1, 4))
    assert classify(high, UNWEIGHTED, low, UNWEIGHTED, m)["weakExact"].fails


def test_per_literal_completeness_does_not_imply_complete():
    hv = propositional_vocabulary("pq")
    high = prop_theory("pq")
    low = prop_theory("ab", [Iff(atom("a"), Not(atom("b")))])
    m = RefinementMapping(hv, low.vocabulary, {atom("p"): atom("a"), atom("q"): atom("b")})
    assert m.is_separable()
    assert sufficient_complete(high, low, m)
    v = check_complete(high, low, m)
    assert v.fails and v.witness.literals == ("p", "q")
    assert classify(high, UNWEIGHTED, low, UNWEIGHTED, m)["complete"].fails


SEPARABLE_NODIFF = """
sorts: {student: [A], course: [B], iqlevel: [L], grade: [B, O, G]}
predicates:
  iq: [student, iqlevel]
  takes: [student, course]
  grades: [student, course, grade]
sentences:
  - exists: {vars: [[u, grade]], body: {atom: [grades, A, B, u]}}
  - forall:
      vars: [[u, grade], [v, grade]]
      body: {implies: [{and: [{atom: [grades, A, B, u]}, {atom: [grades, A, B, v]}]}, {eq: [u, v]}]}
"""

SEPARABLE_NODIFF_MAP = """
identity: [iq, takes]
entries:
  - {atom: [grades, A, B, B], formula: {or: [{atom: [grades, A, B, "5"]}, {atom: [grades, A, B, "6"]}]}}
  - {atom: [grades, A, B, O], formula: {or: [{atom: [grades, A, B, "7"]}, {atom: [grades, A, B, "8"]}]}}
  - {atom: [grades, A, B, G], formula: {or: [{atom: [grades, A, B, "9"]}, {atom: [grades, A, B, "10"]}]}}
"""


def test_difficulty_blind_variant_with_separable_mapping():
    low = scenario("university_nodiff").low
    doc = parse_theory_text(SEPARABLE_NODIFF)
    high = doc.grounded()
    m = parse_mapping_text(SEPARABLE_NODIFF_MAP, doc.vocabulary, low.vocabulary)
    assert m.is_separable()
    # each grade band alone is possible at the low level (without the course)
    assert sufficient_complete(high, low, m)
    v = check_complete(high, low, m)
    assert v.fails and "grades(A,B,G)" in v.witness.literals


# ---------------------------------------------------------------------------
# agreement with the definitions

def _sound_by_definition(inst):
    hm = set(models(inst.high))
    return profiles(inst.mapping, inst.low) <= hm


def _complete_by_definition(inst):
    return set(models(inst.high)) <= profiles(inst.mapping, inst.low)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_exact_checks_match_definitions(seed):
    inst = random_abstraction(random.Random(seed))
    h, wh, l, wl, m = inst.args()
    assert check_sound(h, l, m).holds == _sound_by_definition(inst)
    assert check_complete(h, l, m).holds == _complete_by_definition(inst)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_weak_exact_matches_model_probabilities(seed):
    inst = random_abstraction(random.Random(seed))
    h, wh, l, wl, m = inst.args()
    try:
        v = check_weak_exact(h, wh, l, wl, m)
    except ZeroPartitionError:
        return
    expected = True
    for mh in assignments(h.universe):
        f = model_formula(mh)
        if probability(f, h, wh) != probability(m.apply(f), l, wl):
            expected = False
            break
    assert v.holds == expected


def test_weighted_checks_on_zero_weights():
    # p certain by weight at the high level while its image is uncertain
    high = prop_theory("p")
    low = prop_theory("a")
    m = RefinementMapping(high.vocabulary, low.vocabulary, {atom("p"): atom("a")})
    wh = weights({"p": (1, 0)})
    v = check_weighted_sound(high, wh, low, UNWEIGHTED, m)
    assert v.fails and v.witness.kind == "literal"
    assert v.witness.literals == ("~p",)
    assert (v.witness.high_probability, v.witness.low_probability) == (0, F(1, 2))
    assert check_weighted_complete(high, wh, low, UNWEIGHTED, m).holds
    v = check_weighted_exact(high, wh, low, UNWEIGHTED, m)
    assert v.fails


def test_skipped_beyond_cap(university):
    r = classify(*university.args(), cap=3)
    assert r["sound"].holds
    assert r["complete"].status == SKIPPED
    assert "enumeration cap" in r["complete"].reason
    assert r["weightedExact"].status == SKIPPED


def test_skipped_keeps_failing_fast_path(courses):
    r = classify(*courses.args(), cap=3)
    assert r["sound"].fails
    assert r["weightedExact"].fails


def test_float_tolerance(university):
    h, wh, l, wl, m = university.args()
    r = classify(h, wh.to_float(), l, wl.to_float(), m, tol=1e-9)
    assert statuses(r) == {c: HOLDS for c in CLASSES}

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmcabs.errors import (
    ArityError, AtomOutsideUniverseError, CNFBudgetError, EnumerationCapError,
    UnboundVariableError, UnknownSymbolError,
)
from wmcabs.logic import (
    FALSE, TRUE, And, Atom, Eq, Exists, Forall, Iff, Implies, Literal, Model, Not, Or, Theory,
    Universe, Var, Vocabulary, assignments, atom, atoms_of, evaluate, ground, ground_theory,
    model_formula, propositional_vocabulary,
)
from wmcabs.reasoning import (
    all_models, cnf_to_formula, entails, equivalent, is_satisfiable, is_valid, to_cnf,
)
from wmcabs.syntax import format_formula, parse_formula

from conftest import prop_theory

a, b, c, p, q, r, s = (atom(n) for n in "abcpqrs")


# ---------------------------------------------------------------------------
# grounding

def Atom_(pred, *args):
    return Atom(pred, tuple(args))


def forall(binds, body, cls=None):
    cls = cls or Forall
    for var, sort in reversed(binds):
        body = cls(var, sort, body)
    return body


def course_vocab(grades=("7", "8")):
    return Vocabulary({"student": ["A"], "course": ["B"], "level": ["E", "M", "H"],
                       "grade": list(grades)},
                      {"diff": ["course", "level"], "grades": ["student", "course", "grade"]})


def test_ground_forall_disjunction():
    y = Var("y")
    f = forall((("y", "course"),), Or((Atom_("diff", y, "E"), Atom_("diff", y, "M"),
                                       Atom_("diff", y, "H"))))
    assert ground(f, course_vocab()) == Or((atom("diff", "B", "E"), atom("diff", "B", "M"),
                                            atom("diff", "B", "H")))


def test_ground_uniqueness_simplifies_equalities():
    x, y, u, v = Var("x"), Var("y"), Var("u"), Var("v")
    body = Implies(And((Atom_("grades", x, y, u), Atom_("grades", x, y, v))), Eq(u, v))
    f = forall((("x", "student"), ("y", "course"), ("u", "grade"), ("v", "grade")), body)
    g = ground(f, course_vocab())
    g7, g8 = atom("grades", "A", "B", "7"), atom("grades", "A", "B", "8")
    # only the u != v instances survive, both equivalent to ~(g7 & g8)
    universe = course_vocab().universe
    assert equivalent(g, Not(And((g7, g8))), universe=universe)
    assert not any(isinstance(x, Eq) for x in _walk(g))


def _walk(f):
    yield f
    for attr in ("arg", "left", "right", "body"):
        if hasattr(f, attr):
            yield from _walk(getattr(f, attr))
    for x in getattr(f, "args", ()):
        if not isinstance(x, str) and hasattr(x, "__dataclass_fields__"):
            yield from _walk(x)


def test_ground_forall_over_empty_sort_is_true():
    v = Vocabulary({"empty": []}, {"f": ["empty"]})
    assert ground(forall((("x", "empty"),), Atom_("f", Var("x"))), v) == TRUE
    assert ground(Exists("x", "empty", Atom_("f", Var("x"))), v) == FALSE


def test_ground_errors():
    v = course_vocab()
    with pytest.raises(UnknownSymbolError):
        ground(atom("nope", "B"), v)
    with pytest.raises(ArityError):
        ground(atom("diff", "B"), v)
    with pytest.raises(UnboundVariableError):
        ground(Atom_("diff", Var("y"), "E"), v)
    with pytest.raises(UnknownSymbolError):
        ground(forall((("y", "nosort"),), Atom_("diff", Var("y"), "E")), v)


def test_ground_theory_is_identity_on_ground_sentences():
    t = prop_theory("ab", [Or((a, b)), Not(a)])
    assert ground_theory(t) == t


# ---------------------------------------------------------------------------
# evaluation and models

def test_evaluate_examples():
    u = Universe([p, q])
    m = Model(u, [True, False])
    assert evaluate(m, p)
    assert not evaluate(m, Implies(p, q))
    assert evaluate(Model(Universe([a, b]), [False, True]), Or((a, b)))


def test_evaluate_outside_universe():
    with pytest.raises(AtomOutsideUniverseError):
        evaluate(Model(Universe([a]), [True]), b)


def test_all_models_examples():
    assert len(list(all_models(prop_theory("ab", [Or((a, b))])))) == 3
    assert list(all_models(prop_theory("ab", [FALSE]))) == []
    assert len(list(all_models(prop_theory("a")))) == 2


def test_all_models_canonical_order():
    got = [m.values for m in all_models(prop_theory("ab", [Or((a, b))]))]
    assert got == [(True, True), (True, False), (False, True)]


def test_all_models_cap():
    t = Theory(propositional_vocabulary([f"x{i}" for i in range(6)]), ())
    with pytest.raises(EnumerationCapError):
        list(all_models(t, cap=5))


def test_model_formula():
    u = Universe([a, b])
    assert model_formula(Model(u, [True, False])) == And((a, Not(b)))
    assert model_formula(Model(Universe([p]), [True])) == p
    for m1, m2 in itertools.product(assignments(u), repeat=2):
        assert evaluate(m2, model_formula(m1)) == (m1 == m2)


# ---------------------------------------------------------------------------
# satisfiability, entailment, CNF

def test_satisfiability_examples():
    assert not is_satisfiable(And((s, Not(s))))
    assert is_satisfiable(Or((s, Not(s))))
    assert is_satisfiable(And((a, b)), prop_theory("ab", [Or((a, b))]))


def test_entailment_examples():
    digits = [atom(f"p{i}") for i in range(10)]
    exclusion = [Not(And((x, y))) for x, y in itertools.combinations(digits, 2)]
    t = prop_theory([f"p{i}" for i in range(10)], [Or(tuple(digits))] + exclusion)
    assert entails(t, Iff(Or(tuple(digits[:8])), Not(Or(tuple(digits[8:])))))
    assert entails(prop_theory("ab", [Or((a, b))]), TRUE)
    assert not entails(prop_theory("ab", [Or((a, b))]), a)


def test_to_cnf_examples():
    cnf = to_cnf(Or((p, And((q, r)))))
    assert {frozenset(cl) for cl in cnf} == {
        frozenset({Literal(p), Literal(q)}), frozenset({Literal(p), Literal(r)})}
    assert to_cnf(Not(p)) == [(Literal(p, False),)]
    assert to_cnf(Not(And((p, Not(q))))) == [(Literal(p, False), Literal(q, True))]


def test_to_cnf_budget():
    xs = [And((atom(f"x{i}"), atom(f"y{i}"))) for i in range(12)]
    with pytest.raises(CNFBudgetError):
        to_cnf(Or(tuple(xs)), size_budget=100)


def test_syntax_round_trip():
    f = parse_formula("~(p & q) -> r | s <-> p")
    assert parse_formula(format_formula(f)) == f
    assert parse_formula("diff(B,E)") == atom("diff", "B", "E")


# ---------------------------------------------------------------------------
# randomized agreement with the truth-table definition

def formulas(names, depth=3):
    leaves = st.sampled_from([atom(n) for n in names])
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(And),
            st.tuples(sub, sub).map(Or),
            st.tuples(sub, sub).map(lambda x: Implies(*x)),
            st.tuples(sub, sub).map(lambda x: Iff(*x)),
        ),
        max_leaves=8,
    )


NAMES = ["a", "b", "c", "d", "e", "f"]


@settings(max_examples=200, deadline=None)
@given(st.lists(formulas(NAMES), max_size=3), formulas(NAMES))
def test_models_and_entailment_match_truth_tables(sentences, phi):
    t = prop_theory(NAMES, sentences)
    brute = [m for m in assignments(t.universe) if all(evaluate(m, x) for x in sentences)]
    assert list(all_models(t)) == brute
    assert entails(t, phi) == all(evaluate(m, phi) for m in brute)
    assert is_satisfiable(phi, t) == any(evaluate(m, phi) for m in brute)


@settings(max_examples=200, deadline=None)
@given(formulas(NAMES))
def test_to_cnf_equivalent_over_same_atoms(phi):
    cnf = to_cnf(phi)
    g = cnf_to_formula(cnf)
    assert atoms_of(g) <= atoms_of(phi)
    u = propositional_vocabulary(NAMES).universe
    assert all(evaluate(m, g) == evaluate(m, phi) for m in assignments(u))


@settings(max_examples=100, deadline=None)
@given(formulas(NAMES))
def test_validity_matches_truth_table(phi):
    u = propositional_vocabulary(NAMES).universe
    assert is_valid(phi, universe=u) == all(evaluate(m, phi) for m in assignments(u))

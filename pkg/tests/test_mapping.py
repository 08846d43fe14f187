import itertools
import random

import pytest

from wmcabs.errors import MappingError
from wmcabs.logic import (
    And, Model, Not, Or, Var, assignments, atom, evaluate, propositional_vocabulary,
)
from wmcabs.mapping import RefinementMapping, Template
from wmcabs.random_instances import random_formula, random_mapping, vocabulary
from wmcabs.reasoning import equivalent
from wmcabs.syntax import parse_formula

P = parse_formula


def test_apply_university(university):
    m = university.mapping
    assert m.apply(P("diff(B,N)")) == P("diff(B,M) | diff(B,H)")
    assert m.apply(P("grades(A,B,O)")) == P("grades(A,B,7) | grades(A,B,8)")
    for p in m.high.universe:
        assert m.apply(Not(p)) == Not(m.apply(p))


def test_apply_rewrites_abbreviations(university):
    m = university.mapping
    got = m.apply(P("diff(B,E) -> takes(A,B)"))
    assert equivalent(got, P("~diff(B,E) | takes(A,B)"), universe=m.low.universe)


def test_separability():
    hv = propositional_vocabulary("pq")
    lv = propositional_vocabulary("abc")
    a, b, c = atom("a"), atom("b"), atom("c")
    shared = RefinementMapping(hv, lv, {atom("p"): Or((a, b)), atom("q"): Or((b, c))})
    assert not shared.is_separable()
    assert RefinementMapping(hv, lv, {atom("p"): a, atom("q"): Or((b, c))}).is_separable()
    assert RefinementMapping.identity(lv).is_separable()


def test_university_mapping_separable(university):
    assert university.mapping.is_separable()


def test_induced_profile_examples(university):
    m = university.mapping
    true = [P(x) for x in ("iq(A,L)", "takes(A,B)", "diff(B,E)", "grades(A,B,7)", "f1(A,B,7)")]
    ml = Model.from_true_atoms(m.low.universe, true)
    mh = m.induced_profile(ml)
    assert mh[P("grades(A,B,O)")]
    assert not mh[P("grades(A,B,G)")]
    assert m.is_isomorphic(mh, ml)
    assert not m.is_isomorphic(mh.flip(P("diff(B,E)")), ml)

    hv, lv = propositional_vocabulary("p"), propositional_vocabulary("ab")
    conj_map = RefinementMapping(hv, lv, {atom("p"): And((atom("a"), atom("b")))})
    assert conj_map.induced_profile(Model(lv.universe, [True, False])).values == (False,)

    ident = RefinementMapping.identity(lv)
    for ml in assignments(lv.universe):
        assert ident.induced_profile(ml) == ml


def test_profile_is_unique_partner():
    rng = random.Random(2)
    hv, lv = vocabulary(3, "p"), vocabulary(4, "a")
    for _ in range(30):
        m = random_mapping(rng, hv, lv, separable=rng.random() < 0.5, depth=2)
        for ml in assignments(lv.universe):
            partners = [mh for mh in assignments(hv.universe) if m.is_isomorphic(mh, ml)]
            assert partners == [m.induced_profile(ml)]


def test_homomorphism_theorem():
    rng = random.Random(7)
    hv, lv = vocabulary(3, "p"), vocabulary(5, "a")
    for _ in range(200):
        m = random_mapping(rng, hv, lv, separable=rng.random() < 0.5, depth=2)
        phi = random_formula(rng, hv.universe.atoms, depth=4)
        ml = Model(lv.universe, [rng.random() < 0.5 for _ in lv.universe])
        mh = m.induced_profile(ml)
        assert evaluate(mh, phi) == evaluate(ml, m.apply(phi))
        other = mh.flip(rng.choice(hv.universe.atoms))
        assert not m.is_isomorphic(other, ml)


def test_uniform_substitution_preserves_equivalence():
    rng = random.Random(8)
    hv, lv = vocabulary(3, "p"), vocabulary(4, "a")
    checked = 0
    for _ in range(400):
        phi = random_formula(rng, hv.universe.atoms, depth=3)
        psi = random_formula(rng, hv.universe.atoms, depth=3)
        if not equivalent(phi, psi, universe=hv.universe):
            continue
        m = random_mapping(rng, hv, lv, separable=False, depth=2)
        assert equivalent(m.apply(phi), m.apply(psi), universe=lv.universe)
        checked += 1
    assert checked > 0


def test_mapping_errors():
    hv, lv = propositional_vocabulary("pq"), propositional_vocabulary("a")
    with pytest.raises(MappingError):
        RefinementMapping(hv, lv, {atom("p"): atom("a")})
    with pytest.raises(MappingError):
        RefinementMapping(hv, lv, {atom("p"): atom("a"), atom("q"): atom("zz")})
    m = RefinementMapping(hv, lv, {atom("p"): atom("a"), atom("q"): atom("a")})
    with pytest.raises(MappingError):
        m.apply(atom("r"))


def test_templates(university):
    hv, lv = university.high.vocabulary, university.low.vocabulary
    y = Var("y")
    e = atom("diff", y, "E")
    t1 = Template(e, e)
    t2 = Template(e, atom("diff", y, "M"))
    with pytest.raises(MappingError):
        RefinementMapping.from_entries(hv, lv, {}, [t1, t2])
    ground_wins = RefinementMapping.from_entries(
        hv, lv, dict(university.mapping.items()) | {P("diff(B,E)"): P("diff(B,M)")}, [t1])
    assert ground_wins[P("diff(B,E)")] == P("diff(B,M)")


def test_extend_disjoint_and_overlap():
    h1, l1 = propositional_vocabulary("p"), propositional_vocabulary("a")
    h2, l2 = propositional_vocabulary("q"), propositional_vocabulary("b")
    m1 = RefinementMapping(h1, l1, {atom("p"): atom("a")})
    m2 = RefinementMapping(h2, l2, {atom("q"): atom("b")})
    m = m1.extend(m2)
    assert dict(m.items()) == {atom("p"): atom("a"), atom("q"): atom("b")}
    with pytest.raises(MappingError):
        m1.extend(m1)


def test_isomorphism_exhaustive_small():
    hv, lv = propositional_vocabulary("p"), propositional_vocabulary("ab")
    m = RefinementMapping(hv, lv, {atom("p"): Or((atom("a"), atom("b")))})
    for mh, ml in itertools.product(assignments(hv.universe), assignments(lv.universe)):
        expected = mh[atom("p")] == (ml[atom("a")] or ml[atom("b")])
        assert m.is_isomorphic(mh, ml) == expected

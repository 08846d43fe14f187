"""Randomized property suites over small propositional instances.

Each suite returns a ``SuiteResult`` with the number of cases examined
and a description of every failing case.  Probabilities of sampled
formulas are computed by direct enumeration (``ProbabilityTable``), which
keeps the suites independent of the clausal counter.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .checker import (
    check_complete, check_sound, check_weak_exact, check_weighted_sound, classify,
    literal_prob_match,
)
from .derivation import compose, derive_weights
from .logic import Literal, Not, Theory, conj, disj, evaluate
from .random_instances import (
    Instance, models, random_abstraction, random_formula, random_mapping, random_theory,
    random_weights, vocabulary,
)
from .reasoning import entails, is_satisfiable
from .sat import assignment_blocks, eval_columns
from .wmc import UNWEIGHTED, WeightFn, probability, wmc

FORMULAS_PER_INSTANCE = 50


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures"
        if self.failures:
            text += f"; first: {self.failures[0]}"
        return text


class ProbabilityTable:
    """Exact Pr(phi) by evaluating phi on every assignment at once."""

    def __init__(self, theory: Theory, w: WeightFn):
        universe = theory.universe
        (_, self._column, ks), = list(assignment_blocks(universe, 16))
        n = len(universe)
        weights = np.ones(len(ks), dtype=object)
        for j, a in enumerate(universe.atoms):
            pos, neg = w.pair(a)
            bits = (ks >> (n - 1 - j)) & 1
            weights = weights * np.where(bits == 0, Fraction(pos), Fraction(neg)).astype(object)
        self.mask = eval_columns(theory.formula(), self._column)
        self.weights = weights
        self.z = sum(weights[self.mask], Fraction(0))

    def pr(self, phi) -> Fraction:
        sel = self.mask & eval_columns(phi, self._column)
        return sum(self.weights[sel], Fraction(0)) / self.z


def _fmt(*items) -> str:
    return "; ".join(str(i) for i in items)


# ---------------------------------------------------------------------------
# weighted model counting laws


def wmc_laws(rng: random.Random, cases: int = 200) -> SuiteResult:
    """The seven elementary laws of WMC probabilities, through the DPLL engine."""
    res = SuiteResult("wmc-laws")
    while res.cases < cases:
        vocab = vocabulary(rng.randint(1, 6), "a")
        theory = random_theory(rng, vocab)
        w = random_weights(rng, vocab.universe, zeros=0.1)
        if wmc(theory, w) == 0:
            continue
        res.cases += 1
        atoms = vocab.universe.atoms
        phi, psi = random_formula(rng, atoms, 3), random_formula(rng, atoms, 3)
        pr = lambda f: probability(f, theory, w)
        p_phi, p_psi = pr(phi), pr(psi)
        p_and, p_or = pr(conj([phi, psi])), pr(disj([phi, psi]))
        ctx = f"theory={list(map(str, theory.sentences))}, phi={phi}, psi={psi}"
        if entails(theory, phi) and p_phi != 1:
            res.fail(_fmt("law 1", ctx))
        if not is_satisfiable(phi, theory=theory) and p_phi != 0:
            res.fail(_fmt("law 2", ctx))
        if pr(Not(phi)) != 1 - p_phi:
            res.fail(_fmt("law 3", ctx))
        if p_or != p_phi + p_psi - p_and:
            res.fail(_fmt("law 4", ctx))
        if p_phi == 0 and p_and != 0:
            res.fail(_fmt("law 5", ctx))
        if p_phi > 0 and not p_or > 0:
            res.fail(_fmt("law 6", ctx))
        if not p_phi >= p_and:
            res.fail(_fmt("law 7", ctx))
    return res


# ---------------------------------------------------------------------------
# isomorphism and homomorphism


def isomorphism(rng: random.Random, cases: int = 200) -> SuiteResult:
    """m-isomorphic models agree on phi and m(phi); other profiles are not isomorphic."""
    res = SuiteResult("isomorphism-homomorphism")
    while res.cases < cases:
        res.cases += 1
        nh = rng.randint(1, 5)
        hv, lv = vocabulary(nh, "p"), vocabulary(rng.randint(nh, 8), "a")
        m = random_mapping(rng, hv, lv, separable=rng.random() < 0.5)
        ml = next(iter(_random_models(rng, lv.universe, 1)))
        mh = m.induced_profile(ml)
        if not m.is_isomorphic(mh, ml):
            res.fail(_fmt("profile not isomorphic", m, ml))
        for a in hv.universe:
            if m.is_isomorphic(mh.flip(a), ml):
                res.fail(_fmt("flipped profile still isomorphic", m, ml, a))
        for _ in range(10):
            phi = random_formula(rng, hv.universe.atoms, 4)
            if evaluate(mh, phi) != evaluate(ml, m.apply(phi)):
                res.fail(_fmt("homomorphism", m, ml, phi))
    return res


def _random_models(rng, universe, k):
    from .logic import Model

    return [Model(universe, [rng.random() < 0.5 for _ in universe]) for _ in range(k)]


# ---------------------------------------------------------------------------
# consequences of soundness and completeness


def _sound_by_definition(inst: Instance) -> bool:
    f = inst.high.formula()
    return all(evaluate(inst.mapping.induced_profile(ml), f) for ml in models(inst.low))


def _complete_by_definition(inst: Instance) -> bool:
    prof = {inst.mapping.induced_profile(ml) for ml in models(inst.low)}
    return all(mh in prof for mh in models(inst.high))


def _positive_weights(rng, inst: Instance) -> Instance:
    return Instance(inst.high, random_weights(rng, inst.high.universe),
                    inst.low, random_weights(rng, inst.low.universe), inst.mapping, inst.kind)


def sound_consequences(rng: random.Random, cases: int = 200,
                       formulas: int = FORMULAS_PER_INSTANCE) -> SuiteResult:
    """Sound abstractions: low-level possibility implies high-level possibility,
    and high-level certainty implies low-level certainty."""
    res = SuiteResult("sound-consequences")
    while res.cases < cases:
        inst = _positive_weights(rng, random_abstraction(rng, kind=rng.choice(("exact", "loose", "random"))))
        verdict = check_sound(inst.high, inst.low, inst.mapping)
        if verdict.holds != _sound_by_definition(inst):
            res.fail(_fmt("check_sound disagrees with the definition", inst.high.sentences))
        if not verdict.holds:
            continue
        res.cases += 1
        hu, lu = ProbabilityTable(inst.high, UNWEIGHTED), ProbabilityTable(inst.low, UNWEIGHTED)
        hw, lw = ProbabilityTable(inst.high, inst.wh), ProbabilityTable(inst.low, inst.wl)
        for _ in range(formulas):
            phi = random_formula(rng, inst.high.universe.atoms, 4)
            mphi = inst.mapping.apply(phi)
            if lu.pr(mphi) > 0 and not hu.pr(phi) > 0:
                res.fail(_fmt("(a) positive below, zero above", phi, inst.mapping))
            if hw.pr(phi) == 1 and lw.pr(mphi) != 1:
                res.fail(_fmt("(b) certain above, uncertain below", phi, inst.mapping))
    return res


def complete_consequences(rng: random.Random, cases: int = 200,
                          formulas: int = FORMULAS_PER_INSTANCE) -> SuiteResult:
    """Complete abstractions: high-level possibility implies low-level possibility,
    and low-level certainty implies high-level certainty."""
    res = SuiteResult("complete-consequences")
    while res.cases < cases:
        inst = _positive_weights(rng, random_abstraction(rng, kind=rng.choice(("exact", "tight", "random"))))
        verdict = check_complete(inst.high, inst.low, inst.mapping)
        if verdict.holds != _complete_by_definition(inst):
            res.fail(_fmt("check_complete disagrees with the definition", inst.high.sentences))
        if not verdict.holds:
            continue
        res.cases += 1
        hu, lu = ProbabilityTable(inst.high, UNWEIGHTED), ProbabilityTable(inst.low, UNWEIGHTED)
        hw, lw = ProbabilityTable(inst.high, inst.wh), ProbabilityTable(inst.low, inst.wl)
        for _ in range(formulas):
            phi = random_formula(rng, inst.high.universe.atoms, 4)
            mphi = inst.mapping.apply(phi)
            if hu.pr(phi) > 0 and not lu.pr(mphi) > 0:
                res.fail(_fmt("(a) positive above, zero below", phi, inst.mapping))
            if lw.pr(mphi) == 1 and hw.pr(phi) != 1:
                res.fail(_fmt("(b) certain below, uncertain above", phi, inst.mapping))
    return res


def weighted_sound_extension(rng: random.Random, cases: int = 200,
                             formulas: int = FORMULAS_PER_INSTANCE) -> SuiteResult:
    """Weighted sound abstractions extend literal-level positivity to all formulas."""
    res = SuiteResult("weighted-sound-extension")
    while res.cases < cases:
        inst = random_abstraction(rng, kind=rng.choice(("exact", "loose")), zeros=0.15)
        hw, lw = ProbabilityTable(inst.high, inst.wh), ProbabilityTable(inst.low, inst.wl)
        if hw.z == 0 or lw.z == 0:
            continue
        if not check_weighted_sound(*inst.args()).holds:
            continue
        res.cases += 1
        for _ in range(formulas):
            phi = random_formula(rng, inst.high.universe.atoms, 4)
            mphi = inst.mapping.apply(phi)
            if lw.pr(mphi) > 0 and not hw.pr(phi) > 0:
                res.fail(_fmt("positive below, zero above", phi, inst.mapping, inst.wh.explicit))
            if hw.pr(phi) == 1 and lw.pr(mphi) != 1:
                res.fail(_fmt("certain above, uncertain below", phi, inst.mapping, inst.wh.explicit))
    return res


# ---------------------------------------------------------------------------
# literal-level probability match and weak exactness


def _check_formula_sample(rng, inst, res, formulas, label):
    hw, lw = ProbabilityTable(inst.high, inst.wh), ProbabilityTable(inst.low, inst.wl)
    for _ in range(formulas):
        phi = random_formula(rng, inst.high.universe.atoms, 4)
        if hw.pr(phi) != lw.pr(inst.mapping.apply(phi)):
            res.fail(_fmt(label, phi, inst.mapping, list(map(str, inst.low.sentences))))
            return


def literal_match_weak_exact(rng: random.Random, cases: int = 200,
                             formulas: int = FORMULAS_PER_INSTANCE) -> SuiteResult:
    """Separable mappings: matching literal probabilities give weak exactness.

    Instances are random separable abstractions whose high-level weights
    are the mapped-literal marginals of the low-level theory, kept when the
    literal-level match holds.
    """
    res = SuiteResult("literal-match-implies-weak-exact")
    while res.cases < cases:
        inst = random_abstraction(rng, separable=True,
                                  kind=rng.choice(("exact", "loose", "tight", "random")))
        inst.wl = random_weights(rng, inst.low.universe)
        inst.wh = derive_weights(inst.mapping, inst.low, inst.wl, inst.high)
        if ProbabilityTable(inst.high, inst.wh).z == 0:
            continue
        if not literal_prob_match(*inst.args()):
            continue
        res.cases += 1
        verdict = check_weak_exact(*inst.args())
        if not verdict.holds:
            w = verdict.witness
            res.fail(_fmt("weak exactness fails", f"model {w.formula_text()}",
                          f"Pr high {w.high_probability} vs low {w.low_probability}",
                          inst.mapping, list(map(str, inst.low.sentences))))
            continue
        _check_formula_sample(rng, inst, res, formulas, "sampled formula differs")
    return res


def independent_block_instance(rng: random.Random) -> Instance:
    """Separable abstraction whose low-level theory factorises along the mapping."""
    from .logic import Vocabulary

    nh = rng.randint(1, 4)
    hv = vocabulary(nh, "p")
    names, blocks = [], []
    for i in range(nh):
        block = [f"a{i}_{j}" for j in range(rng.randint(1, 2))]
        names.extend(block)
        blocks.append(block)
    lv = Vocabulary({}, {n: () for n in names})
    atoms = {a.predicate: a for a in lv.universe}
    sentences, table = [], {}
    for p, block in zip(hv.universe, blocks):
        local = [atoms[n] for n in block]
        while True:
            part = random_theory(rng, Vocabulary({}, {n: () for n in block}), 2, 2)
            if any(True for _ in models(part)):
                break
        sentences.extend(part.sentences)
        table[p] = random_formula(rng, local, 2)
    from .mapping import RefinementMapping

    m = RefinementMapping(hv, lv, table)
    low = Theory(lv, tuple(sentences))
    wl = random_weights(rng, lv.universe)
    forced = []
    for p in hv.universe:
        if entails(low, m[p]):
            forced.append(p)
        elif entails(low, Not(m[p])):
            forced.append(Not(p))
    high = Theory(hv, tuple(forced))
    return Instance(high, derive_weights(m, low, wl, high), low, wl, m, "independent")


def literal_match_independent(rng: random.Random, cases: int = 200,
                              formulas: int = FORMULAS_PER_INSTANCE) -> SuiteResult:
    """Literal match gives weak exactness when the low level factorises along m."""
    res = SuiteResult("literal-match-independent-blocks")
    while res.cases < cases:
        inst = independent_block_instance(rng)
        if not literal_prob_match(*inst.args()):
            continue
        res.cases += 1
        if not check_weak_exact(*inst.args()).holds:
            res.fail(_fmt("weak exactness fails", inst.mapping, list(map(str, inst.low.sentences))))
            continue
        _check_formula_sample(rng, inst, res, formulas, "sampled formula differs")
    return res


def weak_exact_sampling(rng: random.Random, cases: int = 200,
                        formulas: int = FORMULAS_PER_INSTANCE) -> SuiteResult:
    """A weak-exact verdict means every sampled formula has matching probabilities."""
    res = SuiteResult("weak-exact-sampled-formulas")
    while res.cases < cases:
        inst = independent_block_instance(rng) if rng.random() < 0.5 else _derived(rng)
        if ProbabilityTable(inst.high, inst.wh).z == 0:
            continue
        if not check_weak_exact(*inst.args()).holds:
            continue
        res.cases += 1
        _check_formula_sample(rng, inst, res, formulas, "sampled formula differs")
    return res


def _derived(rng):
    inst = random_abstraction(rng, kind="exact")
    inst.wh = derive_weights(inst.mapping, inst.low, inst.wl, inst.high)
    return inst


# ---------------------------------------------------------------------------
# composition


COMPOSED_CLASSES = ("sound", "complete", "weakExact", "weightedExact")


def _part(rng, index):
    """An abstraction over atoms private to part ``index``."""
    if rng.random() < 0.5:
        inst = independent_block_instance(rng)
    else:
        inst = random_abstraction(rng, max_high=3, max_low=5, kind=rng.choice(("exact", "loose", "tight")))
        inst.wh = derive_weights(inst.mapping, inst.low, inst.wl, inst.high)
    return _rename(inst, f"c{index}_")


def _rename(inst: Instance, prefix: str) -> Instance:
    from .logic import Atom, Vocabulary, substitute
    from .mapping import RefinementMapping

    def ren(vocab):
        table = {a: Atom(prefix + a.predicate, ()) for a in vocab.universe}
        return Vocabulary({}, {prefix + p: () for p in vocab.predicates}), table

    hv, ht = ren(inst.high.vocabulary)
    lv, lt = ren(inst.low.vocabulary)
    high = Theory(hv, tuple(substitute(s, ht) for s in inst.high.sentences))
    low = Theory(lv, tuple(substitute(s, lt) for s in inst.low.sentences))
    m = RefinementMapping(hv, lv, {ht[p]: substitute(f, lt) for p, f in inst.mapping.items()})
    return Instance(high, _rename_weights(inst.wh, ht), low, _rename_weights(inst.wl, lt), m, inst.kind)


def _rename_weights(w: WeightFn, table) -> WeightFn:
    out = {}
    for a, b in table.items():
        pos, neg = w.pair(a)
        out[Literal(b, True)] = pos
        out[Literal(b, False)] = neg
    return WeightFn(out)


def composition(rng: random.Random, cases: int = 200) -> SuiteResult:
    """Classes held by every part are held by the disjoint composition."""
    res = SuiteResult("composition")
    while res.cases < cases:
        parts = [_part(rng, i) for i in range(rng.randint(1, 3))]
        try:
            reports = [classify(*p.args()) for p in parts]
        except Exception:
            continue
        res.cases += 1
        high, wh, m = compose([(p.high, p.wh, p.mapping) for p in parts])
        low = Theory(m.low, tuple(s for p in parts for s in p.low.sentences))
        wl = parts[0].wl.restricted(parts[0].low.universe)
        for p in parts[1:]:
            wl = wl.merged(p.wl.restricted(p.low.universe))
        composite = classify(high, wh, low, wl, m)
        for c in COMPOSED_CLASSES:
            if all(r[c].holds for r in reports) and not composite[c].holds:
                res.fail(_fmt(f"{c} lost by composition", m))
    return res


SUITES = {
    "wmc-laws": wmc_laws,
    "isomorphism": isomorphism,
    "sound": sound_consequences,
    "complete": complete_consequences,
    "weighted-sound": weighted_sound_extension,
    "literal-match": literal_match_weak_exact,
    "literal-match-independent": literal_match_independent,
    "weak-exact-sampling": weak_exact_sampling,
    "composition": composition,
}


def run_suites(seed: int = 0, cases: int = 200, names=None) -> list:
    """Run the named suites (all by default), each with its own seeded RNG."""
    out = []
    for name in names or SUITES:
        rng = random.Random(f"{seed}:{name}")
        out.append(SUITES[name](rng, cases))
    return out

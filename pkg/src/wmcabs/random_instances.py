"""Random propositional theories, weights, mappings and abstractions.

Every generator takes a ``random.Random`` so runs are reproducible from a
seed.  High-level atoms are named ``p0, p1, ...`` and low-level atoms
``a0, a1, ...``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .logic import (
    FALSE, Formula, Iff, Implies, Literal, Model, Not, Theory, Vocabulary,
    assignments, atom, conj, disj, evaluate, propositional_vocabulary,
)
from .mapping import RefinementMapping
from .wmc import ONE, WeightFn

WEIGHT_CHOICES = tuple(Fraction(n, 4) for n in range(1, 9))


def vocabulary(n: int, prefix: str) -> Vocabulary:
    return propositional_vocabulary(f"{prefix}{i}" for i in range(n))


def random_literal(rng: random.Random, atoms) -> Formula:
    a = rng.choice(list(atoms))
    return a if rng.random() < 0.5 else Not(a)


def random_clause(rng: random.Random, atoms, max_len: int = 3) -> Formula:
    atoms = list(atoms)
    k = rng.randint(1, min(max_len, len(atoms)))
    chosen = rng.sample(atoms, k)
    return disj(a if rng.random() < 0.5 else Not(a) for a in chosen)


def random_formula(rng: random.Random, atoms, depth: int = 3) -> Formula:
    """Random formula over ``atoms`` with connective depth at most ``depth``."""
    atoms = list(atoms)
    if depth <= 0 or rng.random() < 0.2:
        return random_literal(rng, atoms) if rng.random() < 0.6 else rng.choice(atoms)
    op = rng.choice(("not", "and", "or", "implies", "iff"))
    sub = lambda: random_formula(rng, atoms, rng.randint(0, depth - 1))
    if op == "not":
        return Not(sub())
    if op == "and":
        return conj([sub(), sub()])
    if op == "or":
        return disj([sub(), sub()])
    if op == "implies":
        return Implies(sub(), sub())
    return Iff(sub(), sub())


def random_theory(rng: random.Random, vocab: Vocabulary, max_clauses: int = 4,
                  max_len: int = 3, satisfiable: bool = True) -> Theory:
    atoms = vocab.universe.atoms
    while True:
        sentences = tuple(random_clause(rng, atoms, max_len)
                          for _ in range(rng.randint(0, max_clauses)))
        t = Theory(vocab, sentences)
        if not satisfiable or any(True for _ in models(t)):
            return t


def random_weights(rng: random.Random, universe, zeros: float = 0.0) -> WeightFn:
    """Independent weights for both polarities under the ``one`` default.

    With ``zeros > 0`` each literal weight is 0 with that probability.
    """
    out = {}
    for a in universe:
        for positive in (True, False):
            w = Fraction(0) if rng.random() < zeros else rng.choice(WEIGHT_CHOICES)
            out[Literal(a, positive)] = w
    return WeightFn(out, ONE)


def models(theory: Theory):
    """Models by direct evaluation (small universes only)."""
    f = theory.formula()
    return (m for m in assignments(theory.universe) if evaluate(m, f))


def random_mapping(rng: random.Random, high: Vocabulary, low: Vocabulary,
                   separable: bool, depth: int = 2) -> RefinementMapping:
    """Random targets; with ``separable`` the targets use disjoint low-level blocks."""
    hi, lo = list(high.universe), list(low.universe)
    table = {}
    if separable:
        if len(lo) < len(hi):
            raise ValueError("a separable mapping needs at least as many low atoms")
        shuffled = lo[:]
        rng.shuffle(shuffled)
        cuts = sorted(rng.sample(range(1, len(lo)), len(hi) - 1)) if len(hi) > 1 else []
        blocks = [shuffled[i:j] for i, j in zip([0] + cuts, cuts + [len(lo)])]
        for p, block in zip(hi, blocks):
            table[p] = random_formula(rng, block, depth)
    else:
        for p in hi:
            k = rng.randint(1, min(3, len(lo)))
            table[p] = random_formula(rng, rng.sample(lo, k), depth)
    return RefinementMapping(high, low, table)


def profiles(m: RefinementMapping, low: Theory) -> set:
    return {m.induced_profile(ml) for ml in models(low)}


def blocking_clause(mh: Model) -> Formula:
    return disj(Not(a) if v else a for a, v in zip(mh.universe.atoms, mh.values))


@dataclass
class Instance:
    high: Theory
    wh: WeightFn
    low: Theory
    wl: WeightFn
    mapping: RefinementMapping
    kind: str = ""

    def args(self):
        return self.high, self.wh, self.low, self.wl, self.mapping


def random_abstraction(rng: random.Random, max_high: int = 4, max_low: int = 8,
                       separable: bool | None = None, kind: str | None = None,
                       zeros: float = 0.0) -> Instance:
    """Random (high, wh, low, wl, m) with a bias towards interesting cases.

    ``kind`` selects how the high-level theory is built from the set P of
    induced profiles of the low-level models:

    * ``exact``: its models are exactly P (sound and complete)
    * ``loose``: a subset of the blocking clauses (sound)
    * ``tight``: all blocking clauses plus random extra clauses (complete)
    * ``random``: random clauses
    """
    kind = kind or rng.choice(("exact", "loose", "tight", "random"))
    while True:
        nh = rng.randint(1, max_high)
        sep = rng.random() < 0.5 if separable is None else separable
        nl = rng.randint(nh if sep else 1, max_low)
        hv, lv = vocabulary(nh, "p"), vocabulary(nl, "a")
        low = random_theory(rng, lv)
        m = random_mapping(rng, hv, lv, sep)
        prof = profiles(m, low)
        blocking = [blocking_clause(mh) for mh in assignments(hv.universe) if mh not in prof]
        if kind == "exact":
            sentences = blocking
        elif kind == "loose":
            sentences = [c for c in blocking if rng.random() < 0.5]
        elif kind == "tight":
            sentences = blocking + [random_clause(rng, hv.universe.atoms)
                                    for _ in range(rng.randint(1, 2))]
        else:
            sentences = [random_clause(rng, hv.universe.atoms) for _ in range(rng.randint(0, 3))]
        high = Theory(hv, tuple(sentences))
        if not any(True for _ in models(high)):
            continue
        wl = random_weights(rng, lv.universe, zeros)
        wh = random_weights(rng, hv.universe, zeros)
        return Instance(high, wh, low, wl, m, kind)


def random_cnf(rng: random.Random, n_atoms: int, n_clauses: int, max_len: int = 3,
               prefix: str = "x") -> Theory:
    """Random clausal theory (possibly unsatisfiable) over ``n_atoms`` atoms."""
    vocab = vocabulary(n_atoms, prefix)
    atoms = vocab.universe.atoms
    return Theory(vocab, tuple(random_clause(rng, atoms, max_len) for _ in range(n_clauses)))


def decomposable_cnf(rng: random.Random, components: int = 10, size: int = 4,
                     clauses_per_component: int = 4) -> Theory:
    """Disjoint components of ``size`` atoms, each with its own random clauses.

    Every block gets one clause over all of its atoms, so each block is a
    single connected component.
    """
    vocab = vocabulary(components * size, "x")
    atoms = vocab.universe.atoms
    sentences = []
    for c in range(components):
        block = atoms[c * size:(c + 1) * size]
        sentences.append(disj(a if rng.random() < 0.5 else Not(a) for a in block))
        for _ in range(clauses_per_component - 1):
            sentences.append(random_clause(rng, block, 3))
    return Theory(vocab, tuple(sentences))


# ---------------------------------------------------------------------------
# clause-abstraction and plant-and-find instances


def clause_abstraction_instance(rng: random.Random):
    """(low, wl, lam, t) eligible for ``abstract_clause``.

    The clause ``lam`` sits over atoms ``q0..`` that occur nowhere else;
    the remaining atoms ``a0..`` carry ordinary random clauses.
    """
    nq = rng.randint(1, 3)
    na = rng.randint(1, 4)
    names = [f"q{i}" for i in range(nq)] + [f"a{i}" for i in range(na)]
    vocab = propositional_vocabulary(names)
    qs = [atom(f"q{i}") for i in range(nq)]
    others = [atom(f"a{i}") for i in range(na)]
    lam = disj(q if rng.random() < 0.5 else Not(q) for q in qs)
    sentences = []
    for _ in range(rng.randint(1, 3)):
        rest = random_clause(rng, others, 2) if rng.random() < 0.8 else FALSE
        sentences.append(disj([lam, rest]))
    for _ in range(rng.randint(0, 2)):
        sentences.append(random_clause(rng, others, 3))
    low = Theory(vocab, tuple(sentences))
    if not any(True for _ in models(low)):
        return clause_abstraction_instance(rng)
    wl = random_weights(rng, vocab.universe)
    return low, wl, lam, atom("t")


@dataclass
class PlantedTrial:
    low: Theory
    wl: WeightFn
    space: object
    planted_mapping: dict
    planted_theory: tuple


def planted_trial(rng: random.Random, decoys: int = 1) -> PlantedTrial:
    """A search problem with a known weighted exact abstraction in its space.

    The low-level theory is a conjunction of independent blocks, one per
    high-level atom; the planted target of ``p_i`` is a clause over block
    ``i`` and the planted high-level theory fixes the atoms whose targets
    are forced either way.
    """
    from .derivation import HypothesisSpace
    from .reasoning import entails

    k = rng.randint(1, 3)
    names, blocks = [], []
    for i in range(k):
        size = rng.randint(1, 3)
        block = [f"b{i}_{j}" for j in range(size)]
        names.extend(block)
        blocks.append([atom(n) for n in block])
    low_vocab = propositional_vocabulary(names)
    sentences = []
    for block in blocks:
        while True:
            local = [random_clause(rng, block, 2) for _ in range(rng.randint(0, 2))]
            if any(evaluate(mb, conj(local)) for mb in assignments(_universe(block))):
                break
        sentences.extend(local)
    low = Theory(low_vocab, tuple(sentences))
    wl = random_weights(rng, low_vocab.universe)
    high_vocab = vocabulary(k, "p")
    hi_atoms = high_vocab.universe.atoms
    planted, forced = {}, []
    candidates = {}
    for p, block in zip(hi_atoms, blocks):
        target = random_clause(rng, block, 2)
        planted[p] = target
        if entails(low, target):
            forced.append(p)
        elif entails(low, Not(target)):
            forced.append(Not(p))
        pool = [target]
        while len(pool) < decoys + 1:
            pool.append(random_clause(rng, rng.choice(blocks), 2))
        rng.shuffle(pool)
        candidates[p] = pool
    space = HypothesisSpace(high_vocab, mapping_candidates=candidates,
                            theory_clause_length=1, max_sentences=k)
    return PlantedTrial(low, wl, space, planted, tuple(forced))


def _universe(atoms):
    from .logic import Universe

    return Universe(atoms)

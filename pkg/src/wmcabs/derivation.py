"""Deriving abstractions: formula substitution, weight guesses, bounded search
and decomposition into independent components."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .checker import (
    AbstractionReport, classify, literal_prob_match, sufficient_complete, sufficient_sound,
)
from .errors import DerivationError, MappingError, VocabularyError, ZeroPartitionError
from .logic import (
    TRUE, Atom, Formula, Literal, Model, Not, Or, Theory, Universe, Vocabulary, as_literal,
    atoms_of, conj, disj, evaluate,
)
from .mapping import RefinementMapping
from .reasoning import entails, is_satisfiable, to_cnf
from .wmc import ONE, WeightFn, probability, partition

WEAK_EXACT = "weakExact"
WEIGHTED_EXACT = "weightedExact"


# ---------------------------------------------------------------------------
# formula substitution


def _clause_literals(f: Formula) -> frozenset:
    lit = as_literal(f)
    if lit is not None:
        return frozenset([lit])
    if isinstance(f, Or):
        out = set()
        for a in f.args:
            out |= _clause_literals(a)
        return frozenset(out)
    raise DerivationError(f"{f} is not a clause")


def _fresh_atom(t, taken: Vocabulary) -> Atom:
    t = t if isinstance(t, Atom) else Atom(str(t), ())
    if t.args or t.predicate in taken.predicates:
        raise DerivationError(f"{t} is not a fresh propositional atom")
    return t


def _drop_predicates(vocab: Vocabulary, gone: set, new: Atom) -> Vocabulary:
    preds = {p: s for p, s in vocab.predicates.items() if p not in gone}
    preds[new.predicate] = ()
    return Vocabulary(vocab.sorts, preds)


def _whole_predicates(vocab: Vocabulary, atoms: set) -> set:
    preds = {a.predicate for a in atoms}
    for p in preds:
        if any(a not in atoms for a in vocab.universe if a.predicate == p):
            raise DerivationError(
                f"the abstracted atoms must cover predicate {p!r} entirely")
    return preds


def _mass(universe_atoms, wl: WeightFn, event: Formula):
    """Sum over assignments to ``universe_atoms`` satisfying ``event`` of prod wl."""
    u = Universe(universe_atoms)
    yes = no = Fraction(0) if not wl.is_float else 0.0
    for bits in itertools.product((True, False), repeat=len(u)):
        m = Model(u, bits)
        weight = Fraction(1) if not wl.is_float else 1.0
        for l in m.literals():
            weight *= wl(l)
        if evaluate(m, event):
            yes += weight
        else:
            no += weight
    return yes, no


def abstract_clause(low: Theory, wl: WeightFn, lam: Formula, t) -> tuple:
    """Replace the clause ``lam`` by a fresh atom ``t``.

    ``low`` must be ground and clausal; the atoms of ``lam`` may occur only
    inside occurrences of ``lam`` itself (clauses ``lam | psi``).  Returns
    ``(high, wh, m)`` with ``m(t) = lam`` and every retained atom mapped to
    itself; ``t`` receives the weight mass of ``lam`` and ``~t`` the mass
    of its complement, so the partition function is unchanged.
    """
    lits = _clause_literals(lam)
    if any(l.complement() in lits for l in lits):
        raise DerivationError(f"{lam} is a tautology; a clause abstraction needs both outcomes")
    q = {l.atom for l in lits}
    t = _fresh_atom(t, low.vocabulary)
    gone = _whole_predicates(low.vocabulary, q)
    sentences = []
    for s in low.sentences:
        for clause in to_cnf(s):
            on_q = {l for l in clause if l.atom in q}
            if not on_q:
                sentences.append(disj(l.to_formula() for l in clause))
                continue
            if on_q != lits:
                raise DerivationError(
                    f"{disj(l.to_formula() for l in clause)} mentions the atoms of {lam} "
                    "outside an occurrence of it")
            rest = [l.to_formula() for l in clause if l.atom not in q]
            sentences.append(disj([t] + rest))
    vocab = _drop_predicates(low.vocabulary, gone, t)
    high = Theory(vocab, tuple(sentences))
    pos, neg = _mass([a for a in low.universe if a in q], wl, lam)
    weights = {}
    for a in high.universe:
        if a == t:
            continue
        weights[Literal(a, True)], weights[Literal(a, False)] = wl.pair(a)
    weights[Literal(t, True)] = pos
    weights[Literal(t, False)] = neg
    table = {a: a for a in high.universe if a != t}
    table[t] = lam
    m = RefinementMapping(vocab, low.vocabulary, table)
    return high, WeightFn(weights, ONE), m


def abstract_dichotomy(low: Theory, wl: WeightFn, lam: Formula, t,
                       gamma: Formula | None = None) -> tuple:
    """Single-atom abstraction ``t`` of the event ``lam`` against ``gamma``.

    ``gamma`` defaults to ``~lam``; the low-level theory must entail that
    exactly one of ``lam`` and ``gamma`` holds.  Queries are restricted to
    ``t`` and ``~t``, whose probabilities match those of ``lam`` and ``gamma``.
    """
    gamma = Not(lam) if gamma is None else gamma
    if not entails(low, disj((lam, gamma))):
        raise DerivationError(f"the theory does not entail {lam} | {gamma}")
    if not entails(low, Not(conj((lam, gamma)))):
        raise DerivationError(f"{lam} and {gamma} are not mutually exclusive")
    t = t if isinstance(t, Atom) else Atom(str(t), ())
    vocab = Vocabulary({}, {t.predicate: ()})
    high = Theory(vocab, ())
    wh = WeightFn({Literal(t, True): probability(lam, low, wl),
                   Literal(t, False): probability(gamma, low, wl)}, ONE)
    m = RefinementMapping(vocab, low.vocabulary, {t: lam})
    return high, wh, m


def derive_weights(m: RefinementMapping, low: Theory, wl: WeightFn, high: Theory) -> WeightFn:
    """Marginal weight guess: wh(p) = Pr(m(p)), wh(~p) = Pr(~m(p))."""
    partition(low, wl)
    out = {}
    for p in high.universe:
        out[Literal(p, True)] = probability(m[p], low, wl)
        out[Literal(p, False)] = probability(Not(m[p]), low, wl)
    return WeightFn(out, ONE)


# ---------------------------------------------------------------------------
# bounded search


def clauses_over(universe: Universe, max_length: int) -> list:
    """Non-tautological clauses over ``universe`` in canonical order.

    Shorter clauses first; within a length, by atom index and then by
    sign pattern (positive before negative).
    """
    out = []
    atoms = universe.atoms
    for k in range(1, max_length + 1):
        for combo in itertools.combinations(range(len(atoms)), k):
            for signs in itertools.product((True, False), repeat=k):
                out.append(disj(atoms[i] if s else Not(atoms[i]) for i, s in zip(combo, signs)))
    return out


@dataclass
class HypothesisSpace:
    """Finite space of candidate abstractions.

    ``mapping_candidates`` lists candidate targets per high-level atom; an
    atom without a list draws from all clauses over the low-level atoms of
    length up to ``mapping_clause_length``.  Candidate theories are sets of
    at most ``max_sentences`` clauses taken from ``theory_candidates`` (or,
    when that is ``None``, from all clauses over the high-level atoms up to
    ``theory_clause_length``).
    """

    high: Vocabulary
    mapping_candidates: Mapping = field(default_factory=dict)
    mapping_clause_length: int = 3
    theory_candidates: Sequence | None = None
    theory_clause_length: int = 2
    max_sentences: int = 2
    partial_mapping: Mapping = field(default_factory=dict)
    partial_theory: Sequence = ()
    target: str = WEIGHTED_EXACT

    def __post_init__(self):
        if self.target not in (WEAK_EXACT, WEIGHTED_EXACT):
            raise DerivationError(f"unknown target class {self.target!r}")
        universe = self.high.universe
        for p in list(self.mapping_candidates) + list(self.partial_mapping):
            if p not in universe:
                raise DerivationError(f"{p} is not a high-level atom")
        for s in self.partial_theory:
            if not all(a in universe for a in atoms_of(s)):
                raise DerivationError(f"partial theory sentence {s} leaves the high-level vocabulary")
        if len(self.partial_theory) > self.max_sentences:
            raise DerivationError("the partial theory exceeds the sentence bound")

    def targets(self, p: Atom, low: Vocabulary) -> list:
        if p in self.mapping_candidates:
            cands = list(self.mapping_candidates[p])
        else:
            cands = clauses_over(low.universe, self.mapping_clause_length)
        if p in self.partial_mapping:
            fixed = self.partial_mapping[p]
            cands = [fixed] + [c for c in cands if c != fixed]
        return cands

    def mappings(self, low: Vocabulary):
        """Candidate mappings, those extending the partial mapping first."""
        atoms = self.high.universe.atoms
        per_atom = [self.targets(p, low) for p in atoms]
        seen = set()
        if self.partial_mapping:
            pinned = [[self.partial_mapping[p]] if p in self.partial_mapping else cands
                      for p, cands in zip(atoms, per_atom)]
            for combo in itertools.product(*pinned):
                seen.add(combo)
                yield dict(zip(atoms, combo))
        for combo in itertools.product(*per_atom):
            if combo in seen:
                continue
            yield dict(zip(atoms, combo))

    def theories(self):
        """Candidate sentence tuples, supersets of the partial theory first."""
        pool = (list(self.theory_candidates) if self.theory_candidates is not None
                else clauses_over(self.high.universe, self.theory_clause_length))
        base = tuple(self.partial_theory)
        rest = [c for c in pool if c not in base]
        seen = set()
        for k in range(0, self.max_sentences - len(base) + 1):
            for extra in itertools.combinations(rest, k):
                key = frozenset(base + extra)
                if key not in seen:
                    seen.add(key)
                    yield base + extra
        for k in range(0, self.max_sentences + 1):
            for combo in itertools.combinations(pool, k):
                key = frozenset(combo)
                if key not in seen:
                    seen.add(key)
                    yield combo


@dataclass
class DerivationResult:
    success: bool
    candidates_tried: int
    high: Theory | None = None
    wh: WeightFn | None = None
    mapping: RefinementMapping | None = None
    report: AbstractionReport | None = None
    search_order: str = "mapping-major canonical"

    @property
    def outcome(self) -> str:
        return "success" if self.success else "failure"


def _passes_fast(high, wh, low, wl, m, target) -> bool:
    """Necessary conditions, cheapest first; a False here is conclusive."""
    try:
        if target == WEIGHTED_EXACT and m.is_separable():
            if not sufficient_sound(high, low, m):
                return False
            if not sufficient_complete(high, low, m):
                return False
        return literal_prob_match(high, wh, low, wl, m)
    except ZeroPartitionError:
        return False


def _evaluate(high, wh, low, wl, m, target, cap):
    if not _passes_fast(high, wh, low, wl, m, target):
        return None
    try:
        report = classify(high, wh, low, wl, m, cap)
    except ZeroPartitionError:
        return None
    return report if report[target].holds else None


def _iterate(low: Theory, wl: WeightFn, space: HypothesisSpace, cap):
    tried = 0
    for table in space.mappings(low.vocabulary):
        try:
            m = RefinementMapping(space.high, low.vocabulary, table)
        except MappingError:
            continue
        # the weight guess depends on the mapping only, not on the theory
        wh = derive_weights(m, low, wl, Theory(space.high, ()))
        for sentences in space.theories():
            high = Theory(space.high, sentences)
            tried += 1
            if not is_satisfiable(TRUE, theory=high):
                yield tried, None
                continue
            report = _evaluate(high, wh, low, wl, m, space.target, cap)
            yield tried, (None if report is None else (high, wh, m, report))


def search(low: Theory, wl: WeightFn, space: HypothesisSpace, cap: int | None = None,
           limit: int | None = None) -> DerivationResult:
    """First candidate in canonical order whose report shows the target class.

    ``limit`` bounds the number of candidates examined.
    """
    tried = 0
    for tried, found in _iterate(low, wl, space, cap):
        if found is not None:
            high, wh, m, report = found
            return DerivationResult(True, tried, high, wh, m, report)
        if limit is not None and tried >= limit:
            break
    return DerivationResult(False, tried)


def search_all(low: Theory, wl: WeightFn, space: HypothesisSpace, cap: int | None = None,
               limit: int | None = None) -> list:
    """Every successful candidate, in canonical order."""
    out = []
    for tried, found in _iterate(low, wl, space, cap):
        if found is not None:
            high, wh, m, report = found
            out.append(DerivationResult(True, tried, high, wh, m, report))
        if limit is not None and tried >= limit:
            break
    return out


# ---------------------------------------------------------------------------
# decomposition


def decompose(low: Theory) -> list:
    """Split the sentences into groups that share no atoms.

    Components keep the full vocabulary and appear in order of their
    first sentence.
    """
    n = len(low.sentences)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for i, s in enumerate(low.sentences):
        for a in atoms_of(s):
            if a in owner:
                ri, rj = find(i), find(owner[a])
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            else:
                owner[a] = i
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(low.sentences[i])
    return [Theory(low.vocabulary, tuple(g)) for g in groups.values()]


def compose(parts: Iterable[tuple]) -> tuple:
    """Disjoint union of ``(high, wh, m)`` abstractions of separate components."""
    parts = list(parts)
    if not parts:
        raise DerivationError("nothing to compose")
    high_atoms, low_atoms = set(), set()
    for high, _, m in parts:
        hu, lu = set(high.universe), set(m.low.universe)
        if hu & high_atoms:
            raise DerivationError("high-level vocabularies of the parts overlap")
        if lu & low_atoms:
            raise DerivationError("low-level vocabularies of the parts overlap")
        high_atoms |= hu
        low_atoms |= lu
    high, wh, m = parts[0]
    wh = wh.restricted(high.universe)
    sentences = list(high.sentences)
    vocab = high.vocabulary
    for h, w, mi in parts[1:]:
        try:
            vocab = vocab.merge(h.vocabulary)
            m = m.extend(mi)
        except VocabularyError as exc:
            raise DerivationError(str(exc)) from exc
        sentences.extend(h.sentences)
        wh = wh.merged(w.restricted(h.universe))
    return Theory(vocab, tuple(sentences)), wh, m

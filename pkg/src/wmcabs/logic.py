"""Relational language: vocabularies, formula ASTs, grounding and semantics.

Formulas are immutable trees.  A formula is *ground* when it contains no
variables and no quantifiers; only ground formulas can be evaluated,
counted or mapped.  Grounding expands ``Forall`` to a conjunction and
``Exists`` to a disjunction over the (finite) constants of a sort.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    ArityError,
    AtomOutsideUniverseError,
    UnboundVariableError,
    UnknownSymbolError,
    VocabularyError,
)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


Term = Union[str, Var]


class Formula:
    """Base class of the AST.  Supports ``&``, ``|`` and ``~`` as sugar."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self):
        from .syntax import format_formula

        return format_formula(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "FALSE"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    predicate: str
    args: tuple = ()

    def __repr__(self):
        return f"Atom({str(self)!r})"

    @property
    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term

    def __repr__(self):
        return f"Eq({self.left!s}, {self.right!s})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __repr__(self):
        return f"And({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __repr__(self):
        return f"Or({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Iff({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    sort: str
    body: Formula

    def __repr__(self):
        return f"Forall({self.var}:{self.sort}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    sort: str
    body: Formula

    def __repr__(self):
        return f"Exists({self.var}:{self.sort}, {self.body!r})"


def atom(predicate: str, *args: str) -> Atom:
    return Atom(predicate, tuple(args))


def conj(parts: Iterable[Formula]) -> Formula:
    """Conjunction with unit simplification; empty conjunction is TRUE."""
    out = []
    for p in parts:
        if p == FALSE:
            return FALSE
        if p != TRUE:
            out.append(p)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(parts: Iterable[Formula]) -> Formula:
    """Disjunction with unit simplification; empty disjunction is FALSE."""
    out = []
    for p in parts:
        if p == TRUE:
            return TRUE
        if p != FALSE:
            out.append(p)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def to_formula(self) -> Formula:
        return self.atom if self.positive else Not(self.atom)

    def __str__(self):
        return str(self.atom) if self.positive else "~" + str(self.atom)


def as_literal(f: Formula) -> Literal | None:
    """Return ``f`` as a literal if it is a ground atom or its negation."""
    if isinstance(f, Atom) and f.is_ground:
        return Literal(f, True)
    if isinstance(f, Not) and isinstance(f.arg, Atom) and f.arg.is_ground:
        return Literal(f.arg, False)
    return None


# ---------------------------------------------------------------------------
# vocabulary and universe


class Universe:
    """An ordered set of ground atoms; the order is the canonical atom index."""

    __slots__ = ("atoms", "index", "_hash")

    def __init__(self, atoms: Iterable[Atom]):
        self.atoms = tuple(atoms)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        if len(self.index) != len(self.atoms):
            raise VocabularyError("duplicate atom in universe")
        self._hash = hash(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, a):
        return a in self.index

    def __eq__(self, other):
        return isinstance(other, Universe) and self.atoms == other.atoms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Universe({len(self.atoms)} atoms)"

    def literals(self) -> list[Literal]:
        """All literals, positive before negative for each atom in order."""
        out = []
        for a in self.atoms:
            out.append(Literal(a, True))
            out.append(Literal(a, False))
        return out


@dataclass(frozen=True)
class Vocabulary:
    """Finite sorts of constants plus typed predicates.

    ``sorts`` maps a sort name to its ordered constants; ``predicates``
    maps a predicate name to its ordered argument sorts (possibly empty).
    A constant may belong to several sorts.
    """

    sorts: Mapping[str, tuple] = field(default_factory=dict)
    predicates: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        sorts = {}
        for name, consts in dict(self.sorts).items():
            consts = tuple(str(c) for c in consts)
            if len(set(consts)) != len(consts):
                raise VocabularyError(f"duplicate constant in sort {name!r}")
            sorts[str(name)] = consts
        preds = {}
        for name, arg_sorts in dict(self.predicates).items():
            arg_sorts = tuple(arg_sorts)
            for s in arg_sorts:
                if s not in sorts:
                    raise VocabularyError(
                        f"predicate {name!r} uses undeclared sort {s!r}")
            preds[str(name)] = arg_sorts
        object.__setattr__(self, "sorts", sorts)
        object.__setattr__(self, "predicates", preds)

    def __hash__(self):
        return hash((tuple(self.sorts.items()), tuple(self.predicates.items())))

    def __eq__(self, other):
        return (isinstance(other, Vocabulary) and self.sorts == other.sorts
                and self.predicates == other.predicates)

    @cached_property
    def universe(self) -> Universe:
        atoms = []
        for pred, arg_sorts in self.predicates.items():
            for args in itertools.product(*(self.sorts[s] for s in arg_sorts)):
                atoms.append(Atom(pred, tuple(args)))
        return Universe(atoms)

    @cached_property
    def constants(self) -> frozenset:
        return frozenset(c for cs in self.sorts.values() for c in cs)

    def sort(self, name: str) -> tuple:
        try:
            return self.sorts[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown sort {name!r}") from None

    def check_atom(self, a: Atom) -> None:
        """Raise unless ``a`` is a well-formed ground atom of this vocabulary."""
        if a.predicate not in self.predicates:
            raise UnknownSymbolError(f"unknown predicate {a.predicate!r}")
        arg_sorts = self.predicates[a.predicate]
        if len(arg_sorts) != len(a.args):
            raise ArityError(
                f"{a.predicate} expects {len(arg_sorts)} arguments, got {len(a.args)}")
        for c, s in zip(a.args, arg_sorts):
            if isinstance(c, Var):
                raise UnboundVariableError(f"variable {c.name!r} in {a}")
            if c not in self.sorts[s]:
                raise UnknownSymbolError(
                    f"constant {c!r} is not in sort {s!r} (argument of {a.predicate})")

    def merge(self, other: "Vocabulary") -> "Vocabulary":
        """Union of two vocabularies; shared names must agree."""
        sorts = dict(self.sorts)
        for k, v in other.sorts.items():
            if k in sorts and sorts[k] != v:
                raise VocabularyError(f"sort {k!r} declared differently")
            sorts[k] = v
        preds = dict(self.predicates)
        for k, v in other.predicates.items():
            if k in preds and preds[k] != v:
                raise VocabularyError(f"predicate {k!r} declared differently")
            preds[k] = v
        return Vocabulary(sorts, preds)


def propositional_vocabulary(names: Iterable[str]) -> Vocabulary:
    """Vocabulary of 0-ary predicates, one per name."""
    return Vocabulary({}, {n: () for n in names})


# ---------------------------------------------------------------------------
# structural helpers


def atoms_of(f: Formula) -> set:
    """Ground atoms occurring in a ground formula."""
    out: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, (Forall, Exists)):
            stack.append(g.body)
    return out


def is_ground(f: Formula) -> bool:
    if isinstance(f, (Top, Bottom)):
        return True
    if isinstance(f, Atom):
        return f.is_ground
    if isinstance(f, Eq):
        return not isinstance(f.left, Var) and not isinstance(f.right, Var)
    if isinstance(f, Not):
        return is_ground(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_ground(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return is_ground(f.left) and is_ground(f.right)
    return False


def _plain(f: Formula) -> bool:
    """Ground and free of Eq nodes (grounding leaves such formulas untouched)."""
    if isinstance(f, (Top, Bottom)):
        return True
    if isinstance(f, Atom):
        return f.is_ground
    if isinstance(f, Not):
        return _plain(f.arg)
    if isinstance(f, (And, Or)):
        return all(_plain(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return _plain(f.left) and _plain(f.right)
    return False


def depth(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + depth(f.arg)
    if isinstance(f, (And, Or)):
        return 1 + max((depth(a) for a in f.args), default=0)
    if isinstance(f, (Implies, Iff)):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, (Forall, Exists)):
        return 1 + depth(f.body)
    return 0


def expand_abbreviations(f: Formula) -> Formula:
    """Rewrite ``Implies`` and ``Iff`` into the primitive connectives."""
    if isinstance(f, Not):
        return Not(expand_abbreviations(f.arg))
    if isinstance(f, And):
        return And(tuple(expand_abbreviations(a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(expand_abbreviations(a) for a in f.args))
    if isinstance(f, Implies):
        return Or((Not(expand_abbreviations(f.left)), expand_abbreviations(f.right)))
    if isinstance(f, Iff):
        a, b = expand_abbreviations(f.left), expand_abbreviations(f.right)
        return And((Or((Not(a), b)), Or((Not(b), a))))
    return f


def substitute(f: Formula, table: Mapping) -> Formula:
    """Replace ground atoms by formulas according to ``table`` (others kept)."""
    if isinstance(f, Atom):
        return table.get(f, f)
    if isinstance(f, Not):
        return Not(substitute(f.arg, table))
    if isinstance(f, And):
        return And(tuple(substitute(a, table) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, table) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, table), substitute(f.right, table))
    if isinstance(f, Iff):
        return Iff(substitute(f.left, table), substitute(f.right, table))
    return f


def condition(f: Formula, lit: Literal) -> Formula:
    """Simplify ``f`` under the assumption that ``lit`` holds."""
    if isinstance(f, Atom):
        if f == lit.atom:
            return TRUE if lit.positive else FALSE
        return f
    if isinstance(f, Not):
        g = condition(f.arg, lit)
        if g == TRUE:
            return FALSE
        if g == FALSE:
            return TRUE
        return Not(g)
    if isinstance(f, And):
        return conj(condition(a, lit) for a in f.args)
    if isinstance(f, Or):
        return disj(condition(a, lit) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return condition(expand_abbreviations(f), lit)
    return f


# ---------------------------------------------------------------------------
# grounding


def _resolve(t: Term, env: Mapping[str, str], vocab: Vocabulary | None) -> str:
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariableError(f"unbound variable {t.name!r}")
        return env[t.name]
    return t


def _simp_not(g: Formula) -> Formula:
    if g == TRUE:
        return FALSE
    if g == FALSE:
        return TRUE
    return Not(g)


def ground(f: Formula, vocab: Vocabulary, env: Mapping[str, str] | None = None) -> Formula:
    """Ground ``f`` over ``vocab``.

    Quantifiers expand over their sort, equalities between constants are
    decided by name, and the resulting TRUE/FALSE leaves are folded away.
    Formulas that are already ground and equality-free are returned as is.
    """
    env = dict(env or {})
    if not env and _plain(f):
        _check_atoms(f, vocab)
        return f
    return _ground(f, vocab, env)


def _check_atoms(f: Formula, vocab: Vocabulary) -> None:
    for a in atoms_of(f):
        vocab.check_atom(a)


def _ground(f: Formula, vocab: Vocabulary, env: dict) -> Formula:
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Atom):
        g = Atom(f.predicate, tuple(_resolve(t, env, vocab) for t in f.args))
        vocab.check_atom(g)
        return g
    if isinstance(f, Eq):
        left, right = _resolve(f.left, env, vocab), _resolve(f.right, env, vocab)
        for c in (left, right):
            if c not in vocab.constants:
                raise UnknownSymbolError(f"unknown constant {c!r}")
        return TRUE if left == right else FALSE
    if isinstance(f, Not):
        return _simp_not(_ground(f.arg, vocab, env))
    if isinstance(f, And):
        return conj(_dedupe(_ground(a, vocab, env) for a in f.args))
    if isinstance(f, Or):
        return disj(_dedupe(_ground(a, vocab, env) for a in f.args))
    if isinstance(f, Implies):
        left = _ground(f.left, vocab, env)
        right = _ground(f.right, vocab, env)
        if left == FALSE or right == TRUE:
            return TRUE
        if left == TRUE:
            return right
        if right == FALSE:
            return _simp_not(left)
        return Implies(left, right)
    if isinstance(f, Iff):
        left = _ground(f.left, vocab, env)
        right = _ground(f.right, vocab, env)
        if left == TRUE:
            return right
        if right == TRUE:
            return left
        if left == FALSE:
            return _simp_not(right)
        if right == FALSE:
            return _simp_not(left)
        return Iff(left, right)
    if isinstance(f, (Forall, Exists)):
        consts = vocab.sort(f.sort)
        parts = []
        for c in consts:
            inner = dict(env)
            inner[f.var] = c
            parts.append(_ground(f.body, vocab, inner))
        return conj(_dedupe(parts)) if isinstance(f, Forall) else disj(_dedupe(parts))
    raise TypeError(f"not a formula: {f!r}")


def _dedupe(parts: Iterable[Formula]) -> list:
    seen = set()
    out = []
    for p in parts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# theories and models


@dataclass(frozen=True)
class Theory:
    """A vocabulary plus a finite list of sentences.

    The atom universe is the full grounding of the declared predicates, not
    only the atoms that the sentences happen to mention.
    """

    vocabulary: Vocabulary
    sentences: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    @property
    def universe(self) -> Universe:
        return self.vocabulary.universe

    @property
    def is_ground(self) -> bool:
        return all(_plain(s) for s in self.sentences)

    def formula(self) -> Formula:
        return conj(self.sentences)

    def with_sentences(self, extra: Iterable[Formula]) -> "Theory":
        return Theory(self.vocabulary, self.sentences + tuple(extra))

    @cached_property
    def compiled(self):
        from .sat import compile_theory

        return compile_theory(self)


def ground_theory(theory: Theory) -> Theory:
    """Ground every sentence of ``theory``; sentences that ground to TRUE are dropped."""
    out = []
    for s in theory.sentences:
        g = ground(s, theory.vocabulary)
        if g != TRUE:
            out.append(g)
    return Theory(theory.vocabulary, tuple(out))


class Model:
    """Total truth assignment over a universe."""

    __slots__ = ("universe", "values")

    def __init__(self, universe: Universe, values: Sequence[bool]):
        values = tuple(bool(v) for v in values)
        if len(values) != len(universe):
            raise ValueError("model must assign every atom of the universe")
        self.universe = universe
        self.values = values

    @classmethod
    def from_true_atoms(cls, universe: Universe, true_atoms: Iterable[Atom]) -> "Model":
        true_atoms = set(true_atoms)
        for a in true_atoms:
            if a not in universe:
                raise AtomOutsideUniverseError(f"{a} is not in the universe")
        return cls(universe, [a in true_atoms for a in universe.atoms])

    def __getitem__(self, a: Atom) -> bool:
        try:
            return self.values[self.universe.index[a]]
        except KeyError:
            raise AtomOutsideUniverseError(f"{a} is not in the universe") from None

    def __eq__(self, other):
        return (isinstance(other, Model) and self.universe == other.universe
                and self.values == other.values)

    def __hash__(self):
        return hash((self.universe, self.values))

    def true_atoms(self) -> list:
        return [a for a, v in zip(self.universe.atoms, self.values) if v]

    def literals(self) -> list:
        return [Literal(a, v) for a, v in zip(self.universe.atoms, self.values)]

    def flip(self, a: Atom) -> "Model":
        i = self.universe.index[a]
        vals = list(self.values)
        vals[i] = not vals[i]
        return Model(self.universe, vals)

    def __repr__(self):
        return "Model{" + ", ".join(str(l) for l in self.literals()) + "}"


def evaluate(model: Model, f: Formula) -> bool:
    """``model |= f`` for a ground formula."""
    if isinstance(f, Atom):
        if not f.is_ground:
            raise UnboundVariableError(f"non-ground atom {f}")
        return model[f]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(model, f.arg)
    if isinstance(f, And):
        return all(evaluate(model, a) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(model, a) for a in f.args)
    if isinstance(f, Implies):
        return (not evaluate(model, f.left)) or evaluate(model, f.right)
    if isinstance(f, Iff):
        return evaluate(model, f.left) == evaluate(model, f.right)
    if isinstance(f, Eq):
        if isinstance(f.left, Var) or isinstance(f.right, Var):
            raise UnboundVariableError(f"non-ground equality {f!r}")
        return f.left == f.right
    raise UnboundVariableError(f"cannot evaluate non-ground formula {f!r}")


def model_formula(model: Model) -> Formula:
    """Conjunction of the literals true at ``model``."""
    return conj(l.to_formula() for l in model.literals())


def check_formula(f: Formula, universe: Universe) -> None:
    """Raise unless ``f`` is ground and all its atoms lie in ``universe``."""
    if not is_ground(f):
        raise UnboundVariableError(f"formula is not ground: {f}")
    for a in atoms_of(f):
        if a not in universe:
            raise AtomOutsideUniverseError(f"{a} is not in the universe")


def assignments(universe: Universe) -> Iterator[Model]:
    """All 2^n assignments in canonical order (atom 0 slowest, true first)."""
    for bits in itertools.product((True, False), repeat=len(universe)):
        yield Model(universe, bits)

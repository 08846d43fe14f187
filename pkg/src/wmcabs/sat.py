"""Clausal compilation, DPLL satisfiability and exhaustive enumeration.

Atoms of a universe are numbered 1..n in canonical order; clauses are
tuples of non-zero ints (DIMACS style).  Sub-formulas that would blow up
under distribution get a defining auxiliary variable with a *full*
equivalence, so every model of the original formula extends to exactly
one model of the clauses; counting therefore stays exact as long as the
auxiliaries carry weight 1 on both polarities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import AtomOutsideUniverseError, EnumerationCapError
from .logic import (
    And, Atom, Bottom, Eq, Formula, Iff, Implies, Model, Not, Or, Top, Universe,
    Var, check_formula,
)

DEFAULT_CAP = 24
# clause count above which a disjunction gets auxiliary variables
_DISTRIBUTE_LIMIT = 16


@dataclass(frozen=True)
class ClauseSet:
    n_atoms: int
    n_vars: int
    clauses: tuple

    def extend(self, other: "ClauseSet") -> "ClauseSet":
        """Conjoin ``other``, renumbering its auxiliaries after ours."""
        shift = self.n_vars - self.n_atoms
        extra = []
        for c in other.clauses:
            extra.append(tuple(
                l if abs(l) <= other.n_atoms else (l + shift if l > 0 else l - shift)
                for l in c))
        return ClauseSet(self.n_atoms, self.n_vars + (other.n_vars - other.n_atoms),
                         self.clauses + tuple(extra))


class _Encoder:
    def __init__(self, universe: Universe):
        self.universe = universe
        self.n_vars = len(universe)
        self.clauses: list = []

    def fresh(self) -> int:
        self.n_vars += 1
        return self.n_vars

    # negation normal form over ints: int literal, True, False, ("and", [...]), ("or", [...])
    def nnf(self, f: Formula, pos: bool):
        if isinstance(f, Atom):
            try:
                v = self.universe.index[f] + 1
            except KeyError:
                raise AtomOutsideUniverseError(f"{f} is not in the universe") from None
            return v if pos else -v
        if isinstance(f, Top):
            return pos
        if isinstance(f, Bottom):
            return not pos
        if isinstance(f, Eq):
            if isinstance(f.left, Var) or isinstance(f.right, Var):
                raise ValueError("non-ground equality")
            return (f.left == f.right) == pos
        if isinstance(f, Not):
            return self.nnf(f.arg, not pos)
        if isinstance(f, (And, Or)):
            kind = "and" if isinstance(f, And) == pos else "or"
            return self._node(kind, [self.nnf(a, pos) for a in f.args])
        if isinstance(f, Implies):
            return self.nnf(Or((Not(f.left), f.right)), pos)
        if isinstance(f, Iff):
            a, b = f.left, f.right
            if pos:
                g = And((Or((Not(a), b)), Or((Not(b), a))))
            else:
                g = And((Or((a, b)), Or((Not(a), Not(b)))))
            return self.nnf(g, True)
        raise ValueError(f"cannot compile non-ground formula {f!r}")

    @staticmethod
    def _node(kind, kids):
        unit, zero = (True, False) if kind == "and" else (False, True)
        out = []
        for k in kids:
            if k is zero:
                return zero
            if k is unit:
                continue
            if isinstance(k, tuple) and k[0] == kind:
                out.extend(k[1])
            else:
                out.append(k)
        if not out:
            return unit
        if len(out) == 1:
            return out[0]
        return (kind, out)

    def cnf(self, node) -> list:
        """Clauses for an NNF node (may introduce auxiliaries)."""
        if node is True:
            return []
        if node is False:
            return [()]
        if isinstance(node, int):
            return [(node,)]
        kind, kids = node
        if kind == "and":
            out = []
            for k in kids:
                out.extend(self.cnf(k))
            return out
        # disjunction: distribute while small, else name complex children
        parts = [self.cnf(k) for k in kids]
        size = 1
        for p in parts:
            size *= max(len(p), 1)
        if size <= _DISTRIBUTE_LIMIT:
            acc = [()]
            for p in parts:
                acc = [a + c for a in acc for c in p]
            return [_tidy(c) for c in acc if not _tautology(c)]
        lits = []
        for k in kids:
            lits.append(k if isinstance(k, int) else self.define(k))
        return [_tidy(tuple(lits))]

    def define(self, node) -> int:
        """Auxiliary variable equivalent to ``node``."""
        kind, kids = node
        lits = [k if isinstance(k, int) else self.define(k) for k in kids]
        a = self.fresh()
        if kind == "and":
            for l in lits:
                self.clauses.append((-a, l))
            self.clauses.append((a,) + tuple(-l for l in lits))
        else:
            for l in lits:
                self.clauses.append((a, -l))
            self.clauses.append((-a,) + tuple(lits))
        return a

    def add(self, f: Formula):
        self.clauses.extend(self.cnf(self.nnf(f, True)))

    def result(self) -> ClauseSet:
        return ClauseSet(len(self.universe), self.n_vars, tuple(self.clauses))


def _tautology(c) -> bool:
    s = set(c)
    return any(-l in s for l in s)


def _tidy(c) -> tuple:
    seen = []
    for l in c:
        if l not in seen:
            seen.append(l)
    return tuple(seen)


def compile_formulas(universe: Universe, formulas: Iterable[Formula]) -> ClauseSet:
    enc = _Encoder(universe)
    for f in formulas:
        enc.add(f)
    return enc.result()


def compile_theory(theory) -> ClauseSet:
    return compile_formulas(theory.universe, theory.sentences)


def theory_clauses(theory, extra: Formula | None = None) -> ClauseSet:
    base = theory.compiled
    if extra is None:
        return base
    check_formula(extra, theory.universe)
    return base.extend(compile_formulas(theory.universe, [extra]))


# ---------------------------------------------------------------------------
# DPLL


def _simplify(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            c = tuple(l for l in c if l != -lit)
            if not c:
                return None
        out.append(c)
    return out


def _propagate(clauses, assignment):
    while True:
        unit = None
        for c in clauses:
            if len(c) == 1:
                unit = c[0]
                break
        if unit is None:
            return clauses
        assignment[abs(unit)] = unit > 0
        clauses = _simplify(clauses, unit)
        if clauses is None:
            return None


def _dpll(clauses, assignment):
    clauses = _propagate(clauses, assignment)
    if clauses is None:
        return None
    if not clauses:
        return assignment
    var = min(abs(l) for c in clauses for l in c)
    for lit in (var, -var):
        reduced = _simplify(clauses, lit)
        if reduced is None:
            continue
        trial = dict(assignment)
        trial[var] = lit > 0
        found = _dpll(reduced, trial)
        if found is not None:
            return found
    return None


def solve(cs: ClauseSet):
    """Lexicographically first model (true before false, lowest atom first).

    Returns a dict var -> bool for the atoms 1..n_atoms, or None.  Branching
    follows the variable index so the first model found is the canonical
    first one; unit propagation only fixes forced values, which keeps that
    property.
    """
    if any(len(c) == 0 for c in cs.clauses):
        return None
    found = _dpll(list(cs.clauses), {})
    if found is None:
        return None
    return {v: found.get(v, True) for v in range(1, cs.n_atoms + 1)}


def find_model(formula: Formula | None, theory=None, universe: Universe | None = None) -> Model | None:
    """Canonical-first model of ``formula`` (and ``theory``'s sentences)."""
    if theory is not None:
        universe = theory.universe
        cs = theory_clauses(theory, formula)
    else:
        check_formula(formula, universe)
        cs = compile_formulas(universe, [formula])
    found = solve(cs)
    if found is None:
        return None
    return Model(universe, [found[i + 1] for i in range(len(universe))])


# ---------------------------------------------------------------------------
# exhaustive enumeration (independent of the clausal path)


_BLOCK_BITS = 14


def eval_columns(f: Formula, column) -> np.ndarray:
    """Vectorised ``evaluate`` over a block of assignments.

    ``column(atom)`` returns the boolean column of that atom.
    """
    if isinstance(f, Atom):
        return column(f)
    if isinstance(f, Top):
        return column(None) | True
    if isinstance(f, Bottom):
        return column(None) & False
    if isinstance(f, Not):
        return ~eval_columns(f.arg, column)
    if isinstance(f, And):
        acc = column(None) | True
        for a in f.args:
            acc = acc & eval_columns(a, column)
        return acc
    if isinstance(f, Or):
        acc = column(None) & False
        for a in f.args:
            acc = acc | eval_columns(a, column)
        return acc
    if isinstance(f, Implies):
        return ~eval_columns(f.left, column) | eval_columns(f.right, column)
    if isinstance(f, Iff):
        return eval_columns(f.left, column) == eval_columns(f.right, column)
    if isinstance(f, Eq):
        return (column(None) | True) if f.left == f.right else (column(None) & False)
    raise ValueError(f"cannot evaluate non-ground formula {f!r}")


def assignment_blocks(universe: Universe, cap: int = DEFAULT_CAP):
    """Yield ``(start, column)`` blocks covering all 2^n assignments.

    Assignment number k gives atom j the value ``not bit(n-1-j, k)``, so
    ascending k is the canonical order (atom 0 slowest, true first).
    """
    n = len(universe)
    if n > cap:
        raise EnumerationCapError(
            f"universe has {n} atoms, enumeration cap is {cap}")
    total = 1 << n
    block = min(total, 1 << _BLOCK_BITS)
    offsets = np.arange(block, dtype=np.int64)
    for start in range(0, total, block):
        ks = offsets + start
        cache = {}

        def column(a, ks=ks, cache=cache):
            if a is None:
                return np.zeros(len(ks), dtype=bool)
            col = cache.get(a)
            if col is None:
                try:
                    j = universe.index[a]
                except KeyError:
                    raise AtomOutsideUniverseError(f"{a} is not in the universe") from None
                col = ((ks >> (n - 1 - j)) & 1) == 0
                cache[a] = col
            return col

        yield start, column, ks


def enumerate_models(universe: Universe, formula: Formula, cap: int = DEFAULT_CAP) -> Iterator[Model]:
    n = len(universe)
    for start, column, ks in assignment_blocks(universe, cap):
        mask = eval_columns(formula, column)
        for k in ks[mask]:
            k = int(k)
            yield Model(universe, [not ((k >> (n - 1 - j)) & 1) for j in range(n)])

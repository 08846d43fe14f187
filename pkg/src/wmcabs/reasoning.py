"""Satisfiability, entailment, model enumeration and CNF conversion."""
from __future__ import annotations

import os
from typing import Iterator

from .errors import CNFBudgetError
from .logic import (
    And, Atom, Bottom, Formula, Iff, Implies, Literal, Model, Not, Or, Theory,
    Top, Universe, conj,
)
from .sat import DEFAULT_CAP, enumerate_models, find_model

DEFAULT_CNF_BUDGET = 4096


def default_cap() -> int:
    """Enumeration cap, overridable through ``WMCABS_CAP``."""
    raw = os.environ.get("WMCABS_CAP")
    return int(raw) if raw else DEFAULT_CAP


def all_models(theory: Theory, cap: int | None = None) -> Iterator[Model]:
    """Models of the theory's sentences in canonical order.

    Canonical order is lexicographic by atom index with true before false:
    the first model yielded is the one that makes the most low-index atoms
    true.  Raises ``EnumerationCapError`` when the universe exceeds ``cap``.
    """
    cap = default_cap() if cap is None else cap
    return enumerate_models(theory.universe, theory.formula(), cap)


def is_satisfiable(formula: Formula, theory: Theory | None = None,
                   universe: Universe | None = None) -> bool:
    """DPLL satisfiability of ``formula`` (conjoined with ``theory`` if given)."""
    return find_model(formula, theory=theory, universe=_universe(formula, theory, universe)) is not None


def satisfying_model(formula: Formula, theory: Theory | None = None,
                     universe: Universe | None = None) -> Model | None:
    return find_model(formula, theory=theory, universe=_universe(formula, theory, universe))


def _universe(formula, theory, universe):
    if theory is not None:
        return theory.universe
    if universe is None:
        from .logic import atoms_of

        universe = Universe(sorted(atoms_of(formula), key=str))
    return universe


def entails(theory: Theory, formula: Formula) -> bool:
    return not is_satisfiable(Not(formula), theory)


def is_valid(formula: Formula, universe: Universe | None = None) -> bool:
    return not is_satisfiable(Not(formula), universe=universe)


def equivalent(a: Formula, b: Formula, theory: Theory | None = None,
               universe: Universe | None = None) -> bool:
    return not is_satisfiable(Not(Iff(a, b)), theory=theory, universe=universe)


# ---------------------------------------------------------------------------
# distribution-based CNF (no auxiliary atoms)


def _nnf(f: Formula, pos: bool):
    if isinstance(f, Atom):
        return Literal(f, pos)
    if isinstance(f, Top):
        return pos
    if isinstance(f, Bottom):
        return not pos
    if isinstance(f, Not):
        return _nnf(f.arg, not pos)
    if isinstance(f, (And, Or)):
        kind = "and" if isinstance(f, And) == pos else "or"
        return (kind, [_nnf(a, pos) for a in f.args])
    if isinstance(f, Implies):
        return _nnf(Or((Not(f.left), f.right)), pos)
    if isinstance(f, Iff):
        a, b = f.left, f.right
        g = (And((Or((Not(a), b)), Or((Not(b), a)))) if pos
             else And((Or((a, b)), Or((Not(a), Not(b))))))
        return _nnf(g, True)
    raise ValueError(f"to_cnf needs a ground formula, got {f!r}")


def _clauses(node, budget):
    if node is True:
        return []
    if node is False:
        return [()]
    if isinstance(node, Literal):
        return [(node,)]
    kind, kids = node
    if kind == "and":
        out = []
        for k in kids:
            out.extend(_clauses(k, budget))
            if len(out) > budget:
                raise CNFBudgetError(f"CNF exceeds {budget} clauses")
        return out
    acc = [()]
    for k in kids:
        part = _clauses(k, budget)
        nxt = []
        for a in acc:
            for c in part:
                nxt.append(a + c)
                if len(nxt) > budget:
                    raise CNFBudgetError(f"CNF exceeds {budget} clauses")
        acc = nxt
    return acc


def to_cnf(formula: Formula, size_budget: int = DEFAULT_CNF_BUDGET) -> list:
    """Equivalent clause list over the same atoms, by distribution.

    Each clause is a tuple of ``Literal`` with duplicates removed;
    tautological and repeated clauses are dropped.  ``[]`` is TRUE and
    ``[()]`` is FALSE.  Raises ``CNFBudgetError`` past ``size_budget``.
    """
    raw = _clauses(_nnf(formula, True), size_budget)
    out = []
    seen = set()
    for c in raw:
        lits = []
        for l in c:
            if l not in lits:
                lits.append(l)
        if any(l.complement() in lits for l in lits):
            continue
        key = frozenset(lits)
        if key in seen:
            continue
        seen.add(key)
        out.append(tuple(lits))
    if len(out) > size_budget:
        raise CNFBudgetError(f"CNF exceeds {size_budget} clauses")
    if any(len(c) == 0 for c in out):
        return [()]
    return out


def cnf_to_formula(clauses) -> Formula:
    from .logic import disj

    return conj(disj(l.to_formula() for l in c) for c in clauses)

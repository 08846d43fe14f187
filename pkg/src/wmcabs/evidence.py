"""Concretization, m-weakening and conditioning on low-level evidence."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EvidenceError, NotDefinableError
from .logic import Formula, Implies, Literal, Theory, as_literal, disj
from .mapping import RefinementMapping
from .reasoning import DEFAULT_CNF_BUDGET, equivalent, is_valid, to_cnf
from .wmc import WeightFn, conditional

EXACT = "exact"
WEAKENED = "weakened"


@dataclass(frozen=True)
class Evidence:
    """A single low-level literal."""

    literal: Literal

    @classmethod
    def of(cls, e) -> "Evidence":
        """Accept an ``Evidence``, a ``Literal`` or a literal formula."""
        if isinstance(e, Evidence):
            return e
        if isinstance(e, Literal):
            return cls(e)
        lit = as_literal(e) if isinstance(e, Formula) else None
        if lit is None:
            raise EvidenceError(
                f"evidence must be a single ground literal, got {e}; "
                "conjunctive evidence is not supported")
        return cls(lit)

    def formula(self) -> Formula:
        return self.literal.to_formula()

    def __str__(self):
        return str(self.literal)


def _evidence(m: RefinementMapping, e) -> Evidence:
    ev = Evidence.of(e)
    if ev.literal.atom not in m.low.universe:
        raise EvidenceError(f"{ev.literal.atom} is not a low-level atom")
    return ev


def is_pure(l: Literal, clauses) -> bool:
    """``l`` occurs in the clause list and its complement does not."""
    comp = l.complement()
    seen = False
    for c in clauses:
        for x in c:
            if x == comp:
                return False
            if x == l:
                seen = True
    return seen


def concretizing_atoms(m: RefinementMapping, e, size_budget: int = DEFAULT_CNF_BUDGET) -> list:
    """High-level atoms whose target mentions ``e`` purely, in universe order."""
    ev = _evidence(m, e)
    return [p for p, f in m.items() if is_pure(ev.literal, to_cnf(f, size_budget))]


def concretize(m: RefinementMapping, e, size_budget: int = DEFAULT_CNF_BUDGET) -> Formula:
    """m⁻¹(e): the disjunction of the concretizing atoms."""
    atoms = concretizing_atoms(m, e, size_budget)
    if not atoms:
        raise EvidenceError(f"{Evidence.of(e)} has no high-level counterpart under the mapping")
    return disj(atoms)


def weaken(m: RefinementMapping, e, size_budget: int = DEFAULT_CNF_BUDGET) -> Formula:
    """m(m⁻¹(e)), the m-weakening of ``e``."""
    return m.apply(concretize(m, e, size_budget))


def is_definable(m: RefinementMapping, e, size_budget: int = DEFAULT_CNF_BUDGET) -> bool:
    """Whether ``e`` entails its m-weakening."""
    ev = _evidence(m, e)
    w = weaken(m, ev, size_budget)
    clauses = to_cnf(w, size_budget)
    if len(clauses) == 1 and ev.literal in clauses[0]:
        # e is pure (hence present) in the only clause, so e entails it
        return True
    return is_valid(Implies(ev.formula(), w), universe=m.low.universe)


@dataclass(frozen=True)
class HighLevelAnswer:
    probability: object
    mode: str
    concretization: Formula
    weakening: Formula


def query_high_level(phi: Formula, e, high: Theory, wh: WeightFn, low: Theory,
                     wl: WeightFn, m: RefinementMapping, *, verify: bool = False,
                     cap: int | None = None) -> HighLevelAnswer:
    """Pr(phi | m⁻¹(e)) at the high level, standing in for a low-level query.

    Assumes a weighted exact abstraction; ``verify=True`` checks that first.
    ``mode`` is ``"exact"`` when ``e`` is equivalent to its weakening and
    ``"weakened"`` when it only entails it; in the latter case the answer
    is the low-level probability conditioned on the weakening, not on ``e``.
    """
    ev = _evidence(m, e)
    if verify:
        from .checker import classify

        report = classify(high, wh, low, wl, m, cap)
        if not report["weightedExact"].holds:
            raise EvidenceError("not a weighted exact abstraction: "
                                f"weightedExact {report['weightedExact'].status}")
    concrete = concretize(m, ev)
    weakening = m.apply(concrete)
    if equivalent(ev.formula(), weakening, universe=m.low.universe):
        mode = EXACT
    elif is_definable(m, ev):
        mode = WEAKENED
    else:
        raise NotDefinableError(f"{ev} does not entail its weakening {weakening}")
    return HighLevelAnswer(conditional(phi, concrete, high, wh), mode, concrete, weakening)

"""Weighted model counting and probabilities.

Two counters compute the same quantity

    WMC(theory, w) = sum over models M of theory of prod_{l in M} w(l)

``method="dpll"`` runs a DPLL counter with unit propagation and
connected-component caching over the clausal compilation of the theory;
``method="enumerate"`` sweeps all 2^n assignments with numpy and never
touches clauses.  Both are exact on rational weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import WeightError, ZeroEvidenceError, ZeroPartitionError
from .logic import TRUE, Atom, Formula, Literal, Model, Theory, Universe, check_formula, conj
from .sat import DEFAULT_CAP, ClauseSet, assignment_blocks, eval_columns, theory_clauses

ONE = "one"
COMPLEMENT = "complement"


def as_number(x):
    """Exact rational from an int, Fraction or decimal string; floats stay floats."""
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(str(x).strip())


@dataclass(frozen=True)
class WeightFn:
    """Literal weights with a default for unmentioned literals.

    With ``default="one"`` every unmentioned literal weighs 1.  With
    ``default="complement"`` an unmentioned literal whose complement is
    mentioned weighs ``1 - w(complement)``; mentioned weights must then lie
    in [0, 1].
    """

    explicit: Mapping = field(default_factory=dict)
    default: str = ONE

    def __post_init__(self):
        if self.default not in (ONE, COMPLEMENT):
            raise WeightError(f"unknown negation default {self.default!r}")
        items = {}
        for lit, val in dict(self.explicit).items():
            if not isinstance(lit, Literal):
                raise WeightError(f"weight keys must be literals, got {lit!r}")
            val = as_number(val)
            if val < 0:
                raise WeightError(f"negative weight {val} for {lit}")
            if self.default == COMPLEMENT and val > 1:
                raise WeightError(
                    f"weight {val} for {lit} lies outside [0,1] under the complement default")
            items[lit] = val
        object.__setattr__(self, "explicit", items)
        object.__setattr__(self, "_hash", hash((frozenset(items.items()), self.default)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, WeightFn) and self.default == other.default
                and self.explicit == other.explicit)

    def __call__(self, lit: Literal):
        if lit in self.explicit:
            return self.explicit[lit]
        if self.default == COMPLEMENT:
            comp = self.explicit.get(lit.complement())
            if comp is not None:
                return 1 - comp
        return self._one()

    def _one(self):
        if self.explicit and all(isinstance(v, float) for v in self.explicit.values()):
            return 1.0
        return Fraction(1)

    def pair(self, a: Atom):
        return self(Literal(a, True)), self(Literal(a, False))

    def to_float(self) -> "WeightFn":
        return WeightFn({l: float(v) for l, v in self.explicit.items()}, self.default)

    @property
    def is_float(self) -> bool:
        return any(isinstance(v, float) for v in self.explicit.values())

    def restricted(self, universe: Universe) -> "WeightFn":
        """Explicit weights for every literal of ``universe`` (default resolved)."""
        out = {}
        for a in universe.atoms:
            pos, neg = self.pair(a)
            out[Literal(a, True)] = pos
            out[Literal(a, False)] = neg
        return WeightFn(out, ONE)

    def merged(self, other: "WeightFn") -> "WeightFn":
        if self.default != other.default:
            raise WeightError("cannot merge weight functions with different defaults")
        items = dict(self.explicit)
        for k, v in other.explicit.items():
            if k in items and items[k] != v:
                raise WeightError(f"conflicting weights for {k}")
            items[k] = v
        return WeightFn(items, self.default)


UNWEIGHTED = WeightFn({}, ONE)


def model_weight(model: Model, w: WeightFn):
    """Product of ``w`` over the literals true at ``model``."""
    acc = Fraction(1) if not w.is_float else 1.0
    for l in model.literals():
        acc = acc * w(l)
        if acc == 0:
            return acc
    return acc


# ---------------------------------------------------------------------------
# DPLL counter with component caching


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


def _vars(clauses) -> set:
    return {abs(l) for c in clauses for l in c}


def _components(clauses):
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in clauses:
        for l in c:
            parent.setdefault(abs(l), abs(l))
        first = find(abs(c[0]))
        for l in c[1:]:
            r = find(abs(l))
            if r != first:
                parent[r] = first
    groups: dict = {}
    for c in clauses:
        groups.setdefault(find(abs(c[0])), []).append(c)
    return list(groups.values())


class DPLLCounter:
    """Exact weighted counter over int clauses.

    ``weights[v] = (w(v), w(-v))`` for atom variables; auxiliary variables
    (index beyond the table) weigh 1 on both polarities.  Pure-literal
    elimination is deliberately absent: it is unsound for weighted counts.
    """

    def __init__(self, weights, one):
        self.weights = weights
        self.one = one
        self.cache: dict = {}

    def w(self, lit):
        v = abs(lit)
        if v < len(self.weights):
            pair = self.weights[v]
            return pair[0] if lit > 0 else pair[1]
        return self.one

    def free(self, v):
        if v < len(self.weights):
            pair = self.weights[v]
            return pair[0] + pair[1]
        return self.one + self.one

    def count(self, clauses, scope) -> object:
        """Weighted count of ``clauses`` over the variables in ``scope``."""
        factor = self.one
        assigned = set()
        while True:
            unit = None
            for c in clauses:
                if len(c) == 1:
                    unit = c[0]
                    break
            if unit is None:
                break
            assigned.add(abs(unit))
            factor = factor * self.w(unit)
            clauses = _simplify(clauses, unit)
            if clauses is None or factor == 0:
                return factor * 0
        remaining = _vars(clauses)
        for v in scope:
            if v not in assigned and v not in remaining:
                factor = factor * self.free(v)
        if not clauses:
            return factor
        for comp in _components(clauses):
            factor = factor * self.component(comp)
            if factor == 0:
                return factor
        return factor

    def component(self, comp):
        key = frozenset(comp)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        occurrences: dict = {}
        for c in comp:
            for l in c:
                occurrences[abs(l)] = occurrences.get(abs(l), 0) + 1
        var = max(sorted(occurrences), key=lambda v: occurrences[v])
        scope = set(occurrences)
        scope.discard(var)
        total = self.one * 0
        for lit in (var, -var):
            wl = self.w(lit)
            if wl == 0:
                continue
            reduced = _simplify(comp, lit)
            if reduced is None:
                continue
            total = total + wl * self.count(reduced, scope)
        self.cache[key] = total
        return total


def _weight_table(universe: Universe, w: WeightFn):
    table = [(None, None)]
    for a in universe.atoms:
        table.append(w.pair(a))
    return table


@lru_cache(maxsize=64)
def _counter(universe: Universe, w: WeightFn) -> DPLLCounter:
    one = 1.0 if w.is_float else Fraction(1)
    return DPLLCounter(_weight_table(universe, w), one)


def count_clauses(cs: ClauseSet, universe: Universe, w: WeightFn):
    counter = _counter(universe, w)
    if any(len(c) == 0 for c in cs.clauses):
        return counter.one * 0
    return counter.count(list(cs.clauses), set(range(1, cs.n_vars + 1)))


# ---------------------------------------------------------------------------
# enumeration oracle


def _enumerate_wmc(universe: Universe, formula: Formula, w: WeightFn, cap: int):
    n = len(universe)
    pairs = [w.pair(a) for a in universe.atoms]
    if w.is_float:
        return _enumerate_float(universe, formula, pairs, cap)
    # scale each atom's pair to integers over a common denominator
    nums, denom = [], 1
    for pos, neg in pairs:
        d = pos.denominator * neg.denominator // _gcd(pos.denominator, neg.denominator)
        nums.append((int(pos * d), int(neg * d)))
        denom *= d
    total = 0
    for start, column, ks in assignment_blocks(universe, cap):
        mask = eval_columns(formula, column)
        if not mask.any():
            continue
        b = max(0, min(n, int(len(ks)).bit_length() - 1))
        high = n - b
        # atoms [high, n) vary inside the block, atoms [0, high) are fixed
        k0 = int(ks[0])
        prefix = 1
        for j in range(high):
            bit = (k0 >> (n - 1 - j)) & 1
            prefix *= nums[j][bit]
        if prefix == 0:
            continue
        bound = 1
        for j in range(high, n):
            bound *= max(nums[j])
        if bound * len(ks) < 2 ** 62:
            prod = np.ones(len(ks), dtype=np.int64)
            for j in range(high, n):
                bits = (ks >> (n - 1 - j)) & 1
                prod *= np.where(bits == 0, nums[j][0], nums[j][1]).astype(np.int64)
            total += prefix * int(prod[mask].sum())
        else:
            prod = np.ones(len(ks), dtype=object)
            for j in range(high, n):
                bits = (ks >> (n - 1 - j)) & 1
                prod = prod * np.where(bits == 0, nums[j][0], nums[j][1]).astype(object)
            total += prefix * int(sum(prod[mask]))
    return Fraction(total, denom)


def _enumerate_float(universe, formula, pairs, cap):
    n = len(universe)
    total = 0.0
    for start, column, ks in assignment_blocks(universe, cap):
        mask = eval_columns(formula, column)
        prod = np.ones(len(ks))
        for j in range(n):
            bits = (ks >> (n - 1 - j)) & 1
            prod *= np.where(bits == 0, float(pairs[j][0]), float(pairs[j][1]))
        total += float(prod[mask].sum())
    return total


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# public API


def wmc(theory: Theory, w: WeightFn, extra: Formula | None = None,
        method: str = "dpll", cap: int = DEFAULT_CAP):
    """WMC of ``theory`` (conjoined with ``extra`` when given)."""
    if method == "dpll":
        return count_clauses(theory_clauses(theory, extra), theory.universe, w)
    if method == "enumerate":
        f = theory.formula() if extra is None else conj((theory.formula(), extra))
        if extra is not None:
            check_formula(extra, theory.universe)
        return _enumerate_wmc(theory.universe, f, w, cap)
    raise ValueError(f"unknown method {method!r}")


def partition(theory: Theory, w: WeightFn, **kw):
    z = wmc(theory, w, **kw)
    if z == 0:
        raise ZeroPartitionError("WMC(theory, w) = 0: probabilities are undefined")
    return z


def probability(phi: Formula, theory: Theory, w: WeightFn, **kw):
    """Pr(phi, theory, w) = WMC(phi & theory) / WMC(theory)."""
    z = partition(theory, w, **kw)
    if phi == TRUE:
        return z / z
    return wmc(theory, w, phi, **kw) / z


def conditional(phi: Formula, e: Formula, theory: Theory, w: WeightFn, **kw):
    """Pr(phi | e, theory, w) = WMC(phi & e & theory) / WMC(e & theory)."""
    ze = wmc(theory, w, e, **kw) if e != TRUE else wmc(theory, w, **kw)
    if ze == 0:
        raise ZeroEvidenceError(f"WMC(e & theory, w) = 0 for evidence {e}")
    return wmc(theory, w, conj((phi, e)), **kw) / ze

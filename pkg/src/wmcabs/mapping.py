"""Refinement mappings from high-level atoms to low-level formulas."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import MappingError
from .logic import (
    And, Atom, Bottom, Eq, Formula, Model, Not, Or, Top, Var,
    Vocabulary, atoms_of, check_formula, evaluate, expand_abbreviations, ground,
)


@dataclass(frozen=True)
class Template:
    """``pattern`` is a high-level atom whose arguments may be ``Var``s;
    ``target`` is a low-level formula over the same variables."""

    pattern: Atom
    target: Formula

    def match(self, a: Atom) -> dict | None:
        if a.predicate != self.pattern.predicate or len(a.args) != len(self.pattern.args):
            return None
        env: dict = {}
        for p, c in zip(self.pattern.args, a.args):
            if isinstance(p, Var):
                if env.setdefault(p.name, c) != c:
                    return None
            elif p != c:
                return None
        return env


class RefinementMapping:
    """Total map from the high-level atom universe to ground low-level formulas.

    The map extends homomorphically to formulas: ``apply`` rewrites
    implications and equivalences first and then substitutes atoms.
    """

    def __init__(self, high: Vocabulary, low: Vocabulary, table: Mapping[Atom, Formula]):
        self.high = high
        self.low = low
        table = dict(table)
        missing = [a for a in high.universe if a not in table]
        if missing:
            raise MappingError(f"mapping is not total: no target for {missing[0]}"
                               + (f" (and {len(missing) - 1} more)" if len(missing) > 1 else ""))
        extra = [a for a in table if a not in high.universe]
        if extra:
            raise MappingError(f"{extra[0]} is not a high-level atom")
        for a, f in table.items():
            try:
                check_formula(f, low.universe)
            except Exception as exc:
                raise MappingError(f"target of {a} is not a ground low-level formula: {exc}") from exc
        self.table = {a: table[a] for a in high.universe}

    @classmethod
    def from_entries(cls, high: Vocabulary, low: Vocabulary,
                     ground_entries: Mapping[Atom, Formula] | None = None,
                     templates: Iterable[Template] = ()) -> "RefinementMapping":
        """Instantiate templates over the high universe; ground entries win.

        An atom covered by two templates, or named twice, is an error.
        """
        ground_entries = dict(ground_entries or {})
        templates = list(templates)
        table = {}
        for a in high.universe:
            if a in ground_entries:
                table[a] = ground_entries[a]
                continue
            hits = [(t, env) for t in templates if (env := t.match(a)) is not None]
            if len(hits) > 1:
                raise MappingError(f"{a} is covered by more than one template")
            if hits:
                t, env = hits[0]
                try:
                    table[a] = ground(t.target, low, env)
                except Exception as exc:
                    raise MappingError(f"cannot instantiate template for {a}: {exc}") from exc
        for a in ground_entries:
            if a not in high.universe:
                raise MappingError(f"{a} is not a high-level atom")
        return cls(high, low, table)

    @classmethod
    def identity(cls, vocab: Vocabulary) -> "RefinementMapping":
        return cls(vocab, vocab, {a: a for a in vocab.universe})

    def __getitem__(self, a: Atom) -> Formula:
        try:
            return self.table[a]
        except KeyError:
            raise MappingError(f"unmapped atom {a}") from None

    def items(self):
        return self.table.items()

    def apply(self, phi: Formula) -> Formula:
        return _apply(self, expand_abbreviations(phi))

    def is_separable(self) -> bool:
        owner = {}
        for p, f in self.table.items():
            for q in atoms_of(f):
                if owner.setdefault(q, p) != p:
                    return False
        return True

    def induced_profile(self, low_model: Model) -> Model:
        """The unique high-level assignment m-isomorphic to ``low_model``."""
        return Model(self.high.universe,
                     [evaluate(low_model, self.table[p]) for p in self.high.universe])

    def is_isomorphic(self, high_model: Model, low_model: Model) -> bool:
        return high_model == self.induced_profile(low_model)

    def extend(self, other: "RefinementMapping") -> "RefinementMapping":
        """Disjoint union with ``other`` (both vocabularies merged)."""
        high = self.high.merge(other.high)
        low = self.low.merge(other.low)
        table = dict(self.table)
        for a, f in other.table.items():
            if a in table:
                raise MappingError(f"{a} is mapped by both parts")
            table[a] = f
        return RefinementMapping(high, low, table)

    def __eq__(self, other):
        return (isinstance(other, RefinementMapping) and self.high == other.high
                and self.low == other.low and self.table == other.table)

    def __hash__(self):
        return hash((self.high, self.low, tuple(self.table.items())))

    def __repr__(self):
        body = ", ".join(f"{a} -> {f}" for a, f in self.table.items())
        return f"RefinementMapping({body})"


def _apply(m: RefinementMapping, f: Formula) -> Formula:
    if isinstance(f, Atom):
        return m[f]
    if isinstance(f, (Top, Bottom, Eq)):
        return f
    if isinstance(f, Not):
        return Not(_apply(m, f.arg))
    if isinstance(f, And):
        return And(tuple(_apply(m, a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_apply(m, a) for a in f.args))
    raise MappingError(f"cannot map non-ground formula {f!r}")


def apply(m: RefinementMapping, phi: Formula) -> Formula:
    return m.apply(phi)


def is_separable(m: RefinementMapping) -> bool:
    return m.is_separable()


def induced_profile(m: RefinementMapping, low_model: Model) -> Model:
    return m.induced_profile(low_model)


def is_isomorphic(high_model: Model, low_model: Model, m: RefinementMapping) -> bool:
    return m.is_isomorphic(high_model, low_model)

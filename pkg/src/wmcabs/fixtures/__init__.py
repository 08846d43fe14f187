"""Bundled example theories and mappings.

Scenarios pair a high-level document, a low-level document and a mapping
document:

``university``
    the lumped university model against the grade-level one
``courses``
    Science in place of CS and Physics in a course listing
``university_nodiff``
    a difficulty-blind model against a world where course B is hard
``university_forced``
    the lumped model with a hard "easy course means good grade" rule
``pq``
    two weight-only atoms p (certain) and q (impossible)
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..documents import TheoryDocument, parse_mapping, parse_theory
from ..logic import Theory
from ..mapping import RefinementMapping
from ..wmc import WeightFn

SCENARIOS = {
    "university": ("university_high", "university_low", "university_map"),
    "courses": ("courses_high", "courses_low", "courses_map"),
    "university_nodiff": ("university_nodiff_high", "university_hard_low", "university_nodiff_map"),
    "university_forced": ("university_forced_high", "university_low", "university_map"),
    "pq": ("pq_high", "pq_low", "pq_map"),
}


def path(name: str) -> Path:
    """Filesystem path of a bundled document (``.yaml`` optional)."""
    if not name.endswith(".yaml"):
        name += ".yaml"
    p = Path(str(resources.files(__package__).joinpath(name)))
    if not p.exists():
        raise FileNotFoundError(f"no bundled fixture {name!r}")
    return p


def theory(name: str) -> TheoryDocument:
    return parse_theory(path(name))


@dataclass
class Scenario:
    name: str
    high: Theory
    wh: WeightFn
    low: Theory
    wl: WeightFn
    mapping: RefinementMapping
    high_doc: TheoryDocument
    low_doc: TheoryDocument

    def args(self) -> tuple:
        """``(high, wh, low, wl, m)`` in the order the checkers take them."""
        return self.high, self.wh, self.low, self.wl, self.mapping


def scenario(name: str) -> Scenario:
    hi_name, lo_name, map_name = SCENARIOS[name]
    hi, lo = theory(hi_name), theory(lo_name)
    m = parse_mapping(path(map_name), hi.vocabulary, lo.vocabulary)
    return Scenario(name, hi.grounded(), hi.weights, lo.grounded(), lo.weights, m, hi, lo)

"""Deciding which abstraction classes hold between two weighted theories.

Every ``check_*`` function returns a ``Verdict``.  Soundness is decided by
a single satisfiability call: the induced profile of a low-level model is
its only m-isomorphic candidate, so the abstraction is sound exactly when
the low-level theory entails the image of the high-level theory.
Completeness and weak exactness iterate over the high-level models and
are subject to the enumeration cap.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EnumerationCapError, NonSeparableError, ZeroPartitionError
from .logic import Formula, Literal, Model, Not, Theory, model_formula
from .mapping import RefinementMapping
from .reasoning import all_models, default_cap, entails, is_satisfiable, satisfying_model
from .wmc import WeightFn, model_weight, partition, wmc

HOLDS = "holds"
FAILS = "fails"
SKIPPED = "skipped"

EXACT = "exact"
FAST = "fast-path"

CLASSES = ("sound", "complete", "weightedSound", "weightedComplete",
           "weightedExact", "weakExact")


@dataclass(frozen=True)
class Witness:
    """Counterexample: a model (as its literals) or a single literal.

    ``kind`` is ``"low_model"``, ``"high_model"`` or ``"literal"``.  For
    weighted failures the two probabilities are attached.
    """

    kind: str
    literals: tuple
    high_probability: object = None
    low_probability: object = None

    @classmethod
    def of_model(cls, kind: str, model: Model, high=None, low=None) -> "Witness":
        return cls(kind, tuple(str(l) for l in model.literals()), high, low)

    @classmethod
    def of_literal(cls, lit: Literal, high=None, low=None) -> "Witness":
        return cls("literal", (str(lit),), high, low)

    def formula_text(self) -> str:
        return " & ".join(self.literals) if self.literals else "true"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Witness | None = None
    reason: str | None = None
    path: str = EXACT

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    @property
    def skipped(self) -> bool:
        return self.status == SKIPPED


def _holds(path=EXACT):
    return Verdict(HOLDS, path=path)


@dataclass(frozen=True)
class AbstractionReport:
    verdicts: dict
    separable: bool
    fast_path_used: bool = False

    def __post_init__(self):
        ordered = {c: self.verdicts[c] for c in CLASSES if c in self.verdicts}
        object.__setattr__(self, "verdicts", ordered)

    def __getitem__(self, name: str) -> Verdict:
        return self.verdicts[name]

    def invariant_violations(self) -> list:
        """Downward implications between the classes that are violated."""
        v = self.verdicts
        out = []
        implied = {
            "weightedExact": ("weakExact", "sound", "complete",
                              "weightedSound", "weightedComplete"),
            "weightedSound": ("sound",),
            "weightedComplete": ("complete",),
        }
        for src, targets in implied.items():
            if src in v and v[src].holds:
                for t in targets:
                    if t in v and v[t].fails:
                        out.append(f"{src} holds but {t} fails")
        return out


def _equal(a, b, tol):
    if tol is None:
        return a == b
    return abs(a - b) <= tol


def _zero(a, tol):
    return a == 0 if tol is None else abs(a) <= tol


# ---------------------------------------------------------------------------
# unweighted classes


def check_sound(high: Theory, low: Theory, m: RefinementMapping) -> Verdict:
    """Every low-level model has an m-isomorphic high-level model."""
    image = m.apply(high.formula())
    counter = satisfying_model(Not(image), theory=low)
    if counter is None:
        return _holds()
    return Verdict(FAILS, Witness.of_model("low_model", counter),
                   reason="induced profile of this low-level model violates the high-level theory")


def _profile_formula(m: RefinementMapping, high_model: Model) -> Formula:
    return m.apply(model_formula(high_model))


def check_complete(high: Theory, low: Theory, m: RefinementMapping,
                   cap: int | None = None) -> Verdict:
    """Every high-level model has an m-isomorphic low-level model."""
    try:
        models = all_models(high, cap)
        for mh in models:
            if not is_satisfiable(_profile_formula(m, mh), theory=low):
                return Verdict(FAILS, Witness.of_model("high_model", mh),
                               reason="no low-level model is m-isomorphic to this high-level model")
    except EnumerationCapError as exc:
        return Verdict(SKIPPED, reason=str(exc))
    return _holds()


# ---------------------------------------------------------------------------
# literal-level probabilities


def literal_probabilities(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
                          m: RefinementMapping) -> list:
    """``[(d, Pr(d, high, wh), Pr(m(d), low, wl))]`` for every high literal."""
    zh = partition(high, wh)
    zl = partition(low, wl)
    out = []
    for d in high.universe.literals():
        ph = wmc(high, wh, d.to_formula()) / zh
        pl = wmc(low, wl, m.apply(d.to_formula())) / zl
        out.append((d, ph, pl))
    return out


def _first_literal(table, predicate):
    for d, ph, pl in table:
        if predicate(ph, pl):
            return Witness.of_literal(d, ph, pl)
    return None


def check_weighted_sound(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
                         m: RefinementMapping, *, sound: Verdict | None = None,
                         table=None, tol=None) -> Verdict:
    """Sound, and every literal probable below is probable above."""
    sound = sound or check_sound(high, low, m)
    if sound.fails:
        return Verdict(FAILS, sound.witness, reason="not a sound abstraction", path=sound.path)
    table = table if table is not None else literal_probabilities(high, wh, low, wl, m)
    bad = _first_literal(table, lambda ph, pl: not _zero(pl, tol) and _zero(ph, tol))
    if bad is not None:
        return Verdict(FAILS, bad, reason="m(d) is probable at the low level but d is not")
    if sound.skipped:
        return Verdict(SKIPPED, reason=sound.reason)
    return _holds(sound.path)


def check_weighted_complete(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
                            m: RefinementMapping, *, complete: Verdict | None = None,
                            table=None, tol=None, cap=None) -> Verdict:
    """Complete, and every literal probable above is probable below."""
    complete = complete or check_complete(high, low, m, cap)
    if complete.fails:
        return Verdict(FAILS, complete.witness, reason="not a complete abstraction",
                       path=complete.path)
    table = table if table is not None else literal_probabilities(high, wh, low, wl, m)
    bad = _first_literal(table, lambda ph, pl: not _zero(ph, tol) and _zero(pl, tol))
    if bad is not None:
        return Verdict(FAILS, bad, reason="d is probable at the high level but m(d) is not")
    if complete.skipped:
        return Verdict(SKIPPED, reason=complete.reason)
    return _holds(complete.path)


def check_weak_exact(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
                     m: RefinementMapping, cap: int | None = None, tol=None) -> Verdict:
    """Pr(phi, high) = Pr(m(phi), low) for every high-level phi.

    Decided on high-level model formulas: every formula is a disjunction
    of them and the images of distinct model formulas are exclusive, so
    agreement on each model of the high-level theory (whose probabilities
    already sum to one) is agreement everywhere.
    """
    zh = partition(high, wh)
    zl = partition(low, wl)
    try:
        for mh in all_models(high, cap):
            ph = model_weight(mh, wh) / zh
            pl = wmc(low, wl, _profile_formula(m, mh)) / zl
            if not _equal(ph, pl, tol):
                return Verdict(FAILS, Witness.of_model("high_model", mh, ph, pl),
                               reason="model-formula probabilities differ")
    except EnumerationCapError as exc:
        return Verdict(SKIPPED, reason=str(exc))
    return _holds()


def check_weighted_exact(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
                         m: RefinementMapping, cap: int | None = None, tol=None,
                         *, sound=None, complete=None, weak=None) -> Verdict:
    sound = sound or check_sound(high, low, m)
    complete = complete or check_complete(high, low, m, cap)
    weak = weak or check_weak_exact(high, wh, low, wl, m, cap, tol)
    parts = (("sound", sound), ("complete", complete), ("weakExact", weak))
    for name, v in parts:
        if v.fails:
            return Verdict(FAILS, v.witness, reason=f"{name} fails", path=v.path)
    for name, v in parts:
        if v.skipped:
            return Verdict(SKIPPED, reason=f"{name} undecided: {v.reason}")
    path = FAST if any(v.path == FAST for _, v in parts) else EXACT
    return _holds(path)


# ---------------------------------------------------------------------------
# literal-level sufficient tests (separable mappings)


def _require_separable(m):
    if not m.is_separable():
        raise NonSeparableError("the mapping is not separable; use the exact check")


def sufficient_sound(high: Theory, low: Theory, m: RefinementMapping) -> bool:
    """Every high-level sentence's image is entailed by the low-level theory."""
    _require_separable(m)
    return all(entails(low, m.apply(s)) for s in high.sentences)


def _unmatched_literal(high: Theory, low: Theory, m: RefinementMapping):
    for d in high.universe.literals():
        f = d.to_formula()
        if is_satisfiable(f, theory=high) and not is_satisfiable(m.apply(f), theory=low):
            return d
    return None


def sufficient_complete(high: Theory, low: Theory, m: RefinementMapping) -> bool:
    """Every literal consistent above has a consistent image below."""
    _require_separable(m)
    return _unmatched_literal(high, low, m) is None


def literal_prob_match(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
                       m: RefinementMapping, *, table=None, tol=None) -> bool:
    """Pr(d, high, wh) = Pr(m(d), low, wl) for every high-level literal d."""
    table = table if table is not None else literal_probabilities(high, wh, low, wl, m)
    return all(_equal(ph, pl, tol) for _, ph, pl in table)


# ---------------------------------------------------------------------------
# aggregate


def classify(high: Theory, wh: WeightFn, low: Theory, wl: WeightFn,
             m: RefinementMapping, cap: int | None = None, tol=None) -> AbstractionReport:
    """Verdicts for all six classes.

    Literal-level tests run first when the mapping is separable.  A
    positive ``sufficient_sound`` settles soundness.  The completeness and
    probability-matching tests are only trusted in their failing
    direction: their positive direction does not survive correlations in
    either theory, so a positive answer falls through to the exact,
    model-level check, and to ``skipped`` when that exceeds the cap.
    """
    cap = default_cap() if cap is None else cap
    separable = m.is_separable()

    if separable and sufficient_sound(high, low, m):
        sound = _holds(FAST)
    else:
        sound = check_sound(high, low, m)

    complete = check_complete(high, low, m, cap)
    if complete.skipped and separable:
        d = _unmatched_literal(high, low, m)
        if d is not None:
            mh = satisfying_model(d.to_formula(), theory=high)
            complete = Verdict(FAILS, Witness.of_model("high_model", mh),
                               reason=f"literal {d} is consistent above but its image is not below",
                               path=FAST)

    try:
        table = literal_probabilities(high, wh, low, wl, m)
    except ZeroPartitionError as exc:
        skipped = Verdict(SKIPPED, reason=str(exc))
        verdicts = {"sound": sound, "complete": complete, "weightedSound": skipped,
                    "weightedComplete": skipped, "weightedExact": skipped, "weakExact": skipped}
        return _finish(verdicts, separable)

    wsound = check_weighted_sound(high, wh, low, wl, m, sound=sound, table=table, tol=tol)
    wcomplete = check_weighted_complete(high, wh, low, wl, m, complete=complete,
                                        table=table, tol=tol)
    weak = check_weak_exact(high, wh, low, wl, m, cap, tol)
    if weak.skipped:
        bad = _first_literal(table, lambda ph, pl: not _equal(ph, pl, tol))
        if bad is not None:
            weak = Verdict(FAILS, bad, reason="literal probabilities differ", path=FAST)
    wexact = check_weighted_exact(high, wh, low, wl, m, cap, tol,
                                  sound=sound, complete=complete, weak=weak)
    verdicts = {"sound": sound, "complete": complete, "weightedSound": wsound,
                "weightedComplete": wcomplete, "weightedExact": wexact, "weakExact": weak}
    return _finish(verdicts, separable)


def _finish(verdicts, separable) -> AbstractionReport:
    report = AbstractionReport(verdicts, separable,
                               any(v.path == FAST for v in verdicts.values()))
    problems = report.invariant_violations()
    assert not problems, problems
    return report

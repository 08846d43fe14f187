"""YAML documents for theories, weights, mappings and hypothesis spaces.

Documents are read with ``yaml.compose`` so every schema error carries the
line and column of the offending node.  Numbers are taken from the raw
scalar text, which makes ``0.25`` an exact ``Fraction(1, 4)``; ratios such
as ``1/6`` are accepted as well.

Formula trees use one key per node::

    true | false
    {atom: [pred, arg, ...]}
    {eq: [a, b]}
    {not: F}
    {and: [F, ...]}    {or: [F, ...]}
    {implies: [F, G]}  {iff: [F, G]}
    {forall: {vars: [[x, sort], ...], body: F}}    (likewise exists)

A string argument is a variable when an enclosing quantifier (or the
entry's ``vars``) binds it, and a constant otherwise.  The full schema is
described in ``docs/format.md``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import yaml
from yaml.nodes import MappingNode, Node, ScalarNode, SequenceNode

from .errors import DocumentError, WeightError, WmcAbsError
from .logic import (
    FALSE, TRUE, And, Atom, Eq, Exists, Forall, Formula, Iff, Implies, Literal, Not, Or,
    Theory, Var, Vocabulary, ground, ground_theory,
)
from .mapping import RefinementMapping, Template
from .wmc import COMPLEMENT, ONE, WeightFn

_BOOL_TAG = "tag:yaml.org,2002:bool"


class _Reader:
    def __init__(self, path):
        self.path = str(path) if path is not None else None

    def error(self, node: Node | None, message: str) -> DocumentError:
        if node is None:
            return DocumentError(message, path=self.path)
        mark = node.start_mark
        return DocumentError(message, mark.line + 1, mark.column + 1, self.path)

    def mapping(self, node, what, required=(), optional=()) -> dict:
        if not isinstance(node, MappingNode):
            raise self.error(node, f"{what} must be a mapping")
        out = {}
        for k, v in node.value:
            if not isinstance(k, ScalarNode):
                raise self.error(k, f"keys of {what} must be plain names")
            if k.value in out:
                raise self.error(k, f"duplicate key {k.value!r} in {what}")
            if k.value not in required and k.value not in optional:
                allowed = ", ".join(list(required) + list(optional))
                raise self.error(k, f"unexpected key {k.value!r} in {what} (allowed: {allowed})")
            out[k.value] = v
        for r in required:
            if r not in out:
                raise self.error(node, f"{what} is missing required key {r!r}")
        return out

    def sequence(self, node, what) -> list:
        if not isinstance(node, SequenceNode):
            raise self.error(node, f"{what} must be a list")
        return list(node.value)

    def name(self, node, what) -> str:
        if not isinstance(node, ScalarNode) or node.value == "":
            raise self.error(node, f"{what} must be a non-empty name")
        return node.value

    def names(self, node, what) -> list:
        return [self.name(n, what) for n in self.sequence(node, what + " list")]

    def number(self, node, what) -> Fraction:
        if not isinstance(node, ScalarNode):
            raise self.error(node, f"{what} must be a number")
        try:
            return Fraction(node.value.strip())
        except (ValueError, ZeroDivisionError):
            raise self.error(node, f"{what} must be a decimal or a ratio, got {node.value!r}") from None

    def integer(self, node, what) -> int:
        if not isinstance(node, ScalarNode):
            raise self.error(node, f"{what} must be an integer")
        try:
            return int(node.value)
        except ValueError:
            raise self.error(node, f"{what} must be an integer, got {node.value!r}") from None

    # ---- formulas

    def bindings(self, node) -> list:
        out = []
        for item in self.sequence(node, "vars"):
            pair = self.sequence(item, "variable binding")
            if len(pair) != 2:
                raise self.error(item, "a variable binding is [name, sort]")
            out.append((self.name(pair[0], "variable"), self.name(pair[1], "sort")))
        return out

    def atom(self, node, scope) -> Atom:
        parts = self.sequence(node, "atom")
        if not parts:
            raise self.error(node, "an atom needs at least a predicate name")
        pred = self.name(parts[0], "predicate")
        args = []
        for p in parts[1:]:
            n = self.name(p, "argument")
            args.append(Var(n) if n in scope else n)
        return Atom(pred, tuple(args))

    def formula(self, node, scope=frozenset()) -> Formula:
        if isinstance(node, ScalarNode):
            if node.tag == _BOOL_TAG or node.value in ("true", "false"):
                return TRUE if node.value.lower() == "true" else FALSE
            raise self.error(node, f"expected a formula, got the scalar {node.value!r}")
        if not isinstance(node, MappingNode) or len(node.value) != 1:
            raise self.error(node, "a formula node is a mapping with exactly one key")
        key, body = node.value[0]
        op = key.value if isinstance(key, ScalarNode) else None
        if op == "atom":
            return self.atom(body, scope)
        if op == "eq":
            parts = self.sequence(body, "eq")
            if len(parts) != 2:
                raise self.error(body, "eq takes two terms")
            a, b = (self.name(p, "term") for p in parts)
            return Eq(Var(a) if a in scope else a, Var(b) if b in scope else b)
        if op == "not":
            return Not(self.formula(body, scope))
        if op in ("and", "or"):
            kids = [self.formula(k, scope) for k in self.sequence(body, op)]
            if not kids:
                return TRUE if op == "and" else FALSE
            if len(kids) == 1:
                return kids[0]
            return And(tuple(kids)) if op == "and" else Or(tuple(kids))
        if op in ("implies", "iff"):
            parts = self.sequence(body, op)
            if len(parts) != 2:
                raise self.error(body, f"{op} takes two formulas")
            left, right = (self.formula(p, scope) for p in parts)
            return Implies(left, right) if op == "implies" else Iff(left, right)
        if op in ("forall", "exists"):
            q = self.mapping(body, op, required=("vars", "body"))
            binds = self.bindings(q["vars"])
            inner = scope | {v for v, _ in binds}
            f = self.formula(q["body"], inner)
            cls = Forall if op == "forall" else Exists
            for v, s in reversed(binds):
                f = cls(v, s, f)
            return f
        raise self.error(key, f"unknown formula node {op!r}")

    def vocabulary(self, node, what="document") -> Vocabulary:
        d = self.mapping(node, what, required=("predicates",), optional=("sorts",))
        return self._vocabulary(d)

    def _vocabulary(self, d) -> Vocabulary:
        sorts = {}
        if "sorts" in d:
            sd = self.mapping_any(d["sorts"], "sorts")
            for k, v in sd:
                sorts[self.name(k, "sort")] = self.names(v, "constant")
        preds = {}
        for k, v in self.mapping_any(d["predicates"], "predicates"):
            name = self.name(k, "predicate")
            arg_sorts = self.names(v, "argument sort")
            for s, sn in zip(arg_sorts, v.value):
                if s not in sorts:
                    raise self.error(sn, f"predicate {name!r} uses undeclared sort {s!r}")
            preds[name] = arg_sorts
        try:
            return Vocabulary(sorts, preds)
        except WmcAbsError as exc:
            raise self.error(d["predicates"], str(exc)) from None

    def mapping_any(self, node, what) -> list:
        if isinstance(node, ScalarNode) and node.value in ("", "null", "~"):
            return []
        if not isinstance(node, MappingNode):
            raise self.error(node, f"{what} must be a mapping")
        seen = set()
        for k, _ in node.value:
            if isinstance(k, ScalarNode) and k.value in seen:
                raise self.error(k, f"duplicate entry {k.value!r} in {what}")
            seen.add(getattr(k, "value", None))
        return node.value

    def ground_in(self, node, f: Formula, vocab: Vocabulary, env=None) -> Formula:
        try:
            return ground(f, vocab, env)
        except WmcAbsError as exc:
            raise self.error(node, str(exc)) from None


def _compose(text: str, path):
    r = _Reader(path)
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise DocumentError(f"malformed YAML: {exc.problem}", mark.line + 1,
                                mark.column + 1, r.path) from None
        raise DocumentError(f"malformed YAML: {exc}", path=r.path) from None
    if node is None:
        raise DocumentError("empty document", path=r.path)
    return r, node


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read document: {exc.strerror}", path=str(path)) from None


def _envs(vocab: Vocabulary, binds, r: _Reader, node):
    sorts = []
    for _, s in binds:
        if s not in vocab.sorts:
            raise r.error(node, f"unknown sort {s!r}")
        sorts.append(vocab.sorts[s])
    names = [v for v, _ in binds]
    for combo in itertools.product(*sorts):
        yield dict(zip(names, combo))


# ---------------------------------------------------------------------------
# theories


@dataclass
class TheoryDocument:
    """Parsed theory file: vocabulary, sentences and expanded weights."""

    vocabulary: Vocabulary
    sentences: tuple
    weights: WeightFn
    negation_default: str = ONE
    path: str | None = None

    def theory(self) -> Theory:
        """The sentences as written (possibly quantified)."""
        return Theory(self.vocabulary, self.sentences)

    def grounded(self) -> Theory:
        return ground_theory(self.theory())


def parse_theory_text(text: str, path=None) -> TheoryDocument:
    r, node = _compose(text, path)
    d = r.mapping(node, "theory document", required=("predicates",),
                  optional=("sorts", "negation_default", "sentences", "weights"))
    vocab = r._vocabulary(d)
    default = ONE
    if "negation_default" in d:
        default = r.name(d["negation_default"], "negation_default")
        if default not in (ONE, COMPLEMENT):
            raise r.error(d["negation_default"], "negation_default must be 'one' or 'complement'")
    sentences = []
    if "sentences" in d and not _is_null(d["sentences"]):
        for s in r.sequence(d["sentences"], "sentences"):
            f = r.formula(s)
            r.ground_in(s, f, vocab)
            sentences.append(f)
    explicit: dict = {}
    if "weights" in d and not _is_null(d["weights"]):
        for entry in r.sequence(d["weights"], "weights"):
            _weight_entry(r, entry, vocab, default, explicit)
    try:
        weights = WeightFn(explicit, default)
    except WeightError as exc:
        raise r.error(d.get("weights"), str(exc)) from None
    return TheoryDocument(vocab, tuple(sentences), weights, default, r.path)


def _is_null(node) -> bool:
    return isinstance(node, ScalarNode) and node.value in ("", "null", "~")


def _weight_entry(r, entry, vocab, default, explicit):
    e = r.mapping(entry, "weight entry", required=("atom",),
                  optional=("vars", "weight", "neg_weight"))
    if "weight" not in e and "neg_weight" not in e:
        raise r.error(entry, "a weight entry needs weight and/or neg_weight")
    binds = r.bindings(e["vars"]) if "vars" in e else []
    pattern = r.atom(e["atom"], {v for v, _ in binds})
    values = {}
    for key, positive in (("weight", True), ("neg_weight", False)):
        if key in e:
            val = r.number(e[key], key)
            if val < 0:
                raise r.error(e[key], f"negative weight {val}")
            if default == COMPLEMENT and val > 1:
                raise r.error(e[key], f"weight {val} lies outside [0,1] under the complement default")
            values[positive] = val
    for env in _envs(vocab, binds, r, e.get("vars")):
        a = r.ground_in(e["atom"], pattern, vocab, env)
        for positive, val in values.items():
            lit = Literal(a, positive)
            if lit in explicit:
                raise r.error(entry, f"duplicate weight for {lit}")
            explicit[lit] = val


def parse_theory(path) -> TheoryDocument:
    return parse_theory_text(_read(path), path)


# ---------------------------------------------------------------------------
# mappings


def parse_mapping_text(text: str, high: Vocabulary, low: Vocabulary, path=None) -> RefinementMapping:
    """Instantiate a mapping document against the two vocabularies.

    Entries whose atom has no variables are ground entries and take
    precedence over templates.  ``identity`` lists predicates mapped to
    the same atom on the low level.
    """
    r, node = _compose(text, path)
    d = r.mapping(node, "mapping document", optional=("identity", "entries"))
    ground_entries: dict = {}
    templates = []
    if "identity" in d and not _is_null(d["identity"]):
        for n in r.sequence(d["identity"], "identity"):
            pred = r.name(n, "predicate")
            if pred not in high.predicates:
                raise r.error(n, f"unknown high-level predicate {pred!r}")
            if low.predicates.get(pred) is None:
                raise r.error(n, f"predicate {pred!r} does not exist at the low level")
            vs = tuple(Var(f"_{i}") for i in range(len(high.predicates[pred])))
            templates.append((n, Template(Atom(pred, vs), Atom(pred, vs))))
    if "entries" in d and not _is_null(d["entries"]):
        for entry in r.sequence(d["entries"], "entries"):
            e = r.mapping(entry, "mapping entry", required=("atom", "formula"), optional=("vars",))
            binds = r.bindings(e["vars"]) if "vars" in e else []
            scope = {v for v, _ in binds}
            pattern = r.atom(e["atom"], scope)
            target = r.formula(e["formula"], scope)
            if not binds:
                a = r.ground_in(e["atom"], pattern, high)
                if a in ground_entries:
                    raise r.error(entry, f"{a} is mapped twice")
                ground_entries[a] = r.ground_in(e["formula"], target, low)
                continue
            for v, s in binds:
                if s not in high.sorts:
                    raise r.error(e["vars"], f"unknown high-level sort {s!r}")
            templates.append((entry, Template(pattern, target)))
    # identity templates yield to explicit ones on the same atom
    explicit = [t for n, t in templates if not _is_identity(t)]
    identity = [t for n, t in templates if _is_identity(t)]
    table = {}
    for a in high.universe:
        if a in ground_entries:
            continue
        hits = [(t, env) for t in explicit if (env := t.match(a)) is not None]
        if not hits:
            hits = [(t, env) for t in identity if (env := t.match(a)) is not None]
        if len(hits) > 1:
            node_of = {id(t): n for n, t in templates}
            raise r.error(node_of[id(hits[1][0])], f"{a} is covered by more than one entry")
        if hits:
            t, env = hits[0]
            node_of = {id(t2): n for n, t2 in templates}
            table[a] = r.ground_in(node_of[id(t)], t.target, low, env)
    table.update(ground_entries)
    try:
        return RefinementMapping(high, low, table)
    except WmcAbsError as exc:
        raise r.error(node, str(exc)) from None


def _is_identity(t: Template) -> bool:
    return t.pattern == t.target


def parse_mapping(path, high: Vocabulary, low: Vocabulary) -> RefinementMapping:
    return parse_mapping_text(_read(path), high, low, path)


# ---------------------------------------------------------------------------
# hypothesis spaces


def parse_space_text(text: str, low: Vocabulary, path=None):
    from .derivation import HypothesisSpace

    r, node = _compose(text, path)
    d = r.mapping(node, "space document", required=("high",),
                  optional=("target", "mapping_candidates", "mapping_clause_length",
                            "theory_candidates", "theory_clause_length", "max_sentences",
                            "partial_mapping", "partial_theory"))
    high = r.vocabulary(d["high"], "high")
    kw = {}
    for key in ("mapping_clause_length", "theory_clause_length", "max_sentences"):
        if key in d:
            kw[key] = r.integer(d[key], key)
    if "target" in d:
        kw["target"] = r.name(d["target"], "target")
        if kw["target"] not in ("weakExact", "weightedExact"):
            raise r.error(d["target"], "target must be weakExact or weightedExact")

    def high_atom(n):
        return r.ground_in(n, r.atom(n, frozenset()), high)

    if "mapping_candidates" in d:
        cands = {}
        for entry in r.sequence(d["mapping_candidates"], "mapping_candidates"):
            e = r.mapping(entry, "candidate entry", required=("atom", "formulas"))
            a = high_atom(e["atom"])
            cands[a] = [r.ground_in(f, r.formula(f), low)
                        for f in r.sequence(e["formulas"], "formulas")]
        kw["mapping_candidates"] = cands
    if "partial_mapping" in d:
        pm = {}
        for entry in r.sequence(d["partial_mapping"], "partial_mapping"):
            e = r.mapping(entry, "partial mapping entry", required=("atom", "formula"))
            pm[high_atom(e["atom"])] = r.ground_in(e["formula"], r.formula(e["formula"]), low)
        kw["partial_mapping"] = pm
    for key in ("theory_candidates", "partial_theory"):
        if key in d:
            kw[key] = tuple(r.ground_in(f, r.formula(f), high) for f in r.sequence(d[key], key))
    try:
        return HypothesisSpace(high, **kw)
    except WmcAbsError as exc:
        raise r.error(node, str(exc)) from None


def parse_space(path, low: Vocabulary):
    return parse_space_text(_read(path), low, path)

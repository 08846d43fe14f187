"""A small concrete syntax for formulas, used by the ``--phi`` style flags.

    phi  ::= imp ('<->' imp)*
    imp  ::= or ('->' imp)?
    or   ::= and ('|' and)*
    and  ::= un ('&' un)*
    un   ::= '~' un | 'forall' x ':' sort '.' phi | 'exists' ... | prim
    prim ::= 'true' | 'false' | '(' phi ')' | name '(' name, ... ')' | name | name '=' name

Names are ``[A-Za-z0-9_]+``.  Inside a quantifier, its variable name
denotes the bound variable; everywhere else names are constants.
"""
from __future__ import annotations

import re

from .errors import WmcAbsError
from .logic import (
    And, Atom, Bottom, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, Top, Var,
)


class FormulaSyntaxError(WmcAbsError):
    pass


_TOKEN = re.compile(r"\s*(<->|->|[~!&|(),:.=]|[A-Za-z0-9_]+)")


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.scope: list = []

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, expected=None):
        if self.i >= len(self.toks):
            raise FormulaSyntaxError(f"unexpected end of input in {self.text!r}")
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r} at {pos}, found {tok!r}")
        self.i += 1
        return tok

    def name(self):
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z0-9_]+", tok):
            raise FormulaSyntaxError(f"expected a name, found {tok!r}")
        return tok

    def term(self, name):
        return Var(name) if name in self.scope else name

    def parse(self):
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"trailing input at {self.toks[self.i][1]} in {self.text!r}")
        return f

    def iff(self):
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self):
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        tok = self.peek()
        if tok in ("~", "!"):
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.take()
            var = self.name()
            self.take(":")
            sort = self.name()
            self.take(".")
            self.scope.append(var)
            body = self.iff()
            self.scope.pop()
            cls = Forall if tok == "forall" else Exists
            return cls(var, sort, body)
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        name = self.name()
        if name == "true":
            return Top()
        if name == "false":
            return Bottom()
        if self.peek() == "(":
            self.take()
            args = [self.term(self.name())]
            while self.peek() == ",":
                self.take()
                args.append(self.term(self.name()))
            self.take(")")
            return Atom(name, tuple(args))
        if self.peek() == "=":
            self.take()
            return Eq(self.term(name), self.term(self.name()))
        return Atom(name, ())


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Forall: 0, Exists: 0}


def _term(t) -> str:
    return t.name if isinstance(t, Var) else str(t)


def format_formula(f: Formula) -> str:
    return _fmt(f, 0)


def _wrap(s, inner, outer):
    return f"({s})" if inner <= outer else s


def _fmt(f: Formula, outer: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        if not f.args:
            return f.predicate
        return f"{f.predicate}({','.join(_term(a) for a in f.args)})"
    if isinstance(f, Eq):
        return f"{_term(f.left)} = {_term(f.right)}"
    p = _PREC[type(f)]
    if isinstance(f, Not):
        return "~" + _fmt(f.arg, p - 1 if isinstance(f.arg, Not) else p)
    if isinstance(f, And):
        return _wrap(" & ".join(_fmt(a, p) for a in f.args), p, outer)
    if isinstance(f, Or):
        return _wrap(" | ".join(_fmt(a, p) for a in f.args), p, outer)
    if isinstance(f, Implies):
        return _wrap(f"{_fmt(f.left, p)} -> {_fmt(f.right, p - 1)}", p, outer)
    if isinstance(f, Iff):
        return _wrap(f"{_fmt(f.left, p)} <-> {_fmt(f.right, p)}", p, outer)
    if isinstance(f, (Forall, Exists)):
        q = "forall" if isinstance(f, Forall) else "exists"
        s = f"{q} {f.var}:{f.sort}. {_fmt(f.body, 0)}"
        return f"({s})" if outer > 0 else s
    raise TypeError(f"not a formula: {f!r}")

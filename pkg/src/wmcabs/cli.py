"""Command-line interface: ``wmc-abs``.

Exit status: 0 when the checked property holds (or the command
succeeded), 1 when it fails, 2 on errors and undecided verdicts.
Document arguments accept a path or ``fixture:NAME`` for a bundled file.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import fixtures
from .checker import classify, literal_probabilities
from .documents import parse_mapping, parse_space, parse_theory
from .errors import WmcAbsError
from .evidence import concretize, is_definable, query_high_level, weaken
from .logic import ground
from .report import format_number, render_report
from .syntax import format_formula, parse_formula
from .wmc import conditional, probability, wmc

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2
FLOAT_TOLERANCE = 1e-9

GATES = {
    "sound-complete": ("sound", "complete"),
    "weighted": ("weightedSound", "weightedComplete"),
    "exact": ("weightedExact",),
    "weak": ("weakExact",),
}


def _doc_path(arg: str):
    if arg.startswith("fixture:"):
        return fixtures.path(arg.split(":", 1)[1])
    return arg


def _load_theory(arg: str, mode: str):
    doc = parse_theory(_doc_path(arg))
    w = doc.weights.to_float() if mode == "float" else doc.weights
    return doc, doc.grounded(), w


def _formula(text: str, vocab):
    return ground(parse_formula(text), vocab)


def _number(x) -> str:
    return format_number(x)


def _out(args, text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_ground(args) -> int:
    doc, theory, _ = _load_theory(args.theory, args.mode)
    for s in theory.sentences:
        _out(args, format_formula(s))
    return EXIT_HOLDS


def cmd_wmc(args) -> int:
    doc, theory, w = _load_theory(args.theory, args.mode)
    extra = _formula(args.phi, doc.vocabulary) if args.phi else None
    _out(args, _number(wmc(theory, w, extra, method=args.method, cap=args.cap)))
    return EXIT_HOLDS


def cmd_query(args) -> int:
    doc, theory, w = _load_theory(args.theory, args.mode)
    phi = _formula(args.phi, doc.vocabulary)
    if args.evidence:
        value = conditional(phi, _formula(args.evidence, doc.vocabulary), theory, w)
    else:
        value = probability(phi, theory, w)
    _out(args, _number(value))
    return EXIT_HOLDS


def _load_triple(args):
    hdoc, high, wh = _load_theory(args.high, args.mode)
    ldoc, low, wl = _load_theory(args.low, args.mode)
    m = parse_mapping(_doc_path(args.map), hdoc.vocabulary, ldoc.vocabulary)
    return hdoc, high, wh, ldoc, low, wl, m


def cmd_check(args) -> int:
    hdoc, high, wh, ldoc, low, wl, m = _load_triple(args)
    tol = FLOAT_TOLERANCE if args.mode == "float" else None
    report = classify(high, wh, low, wl, m, args.cap, tol)
    if args.format in ("table", "both"):
        _out(args, render_report(report, "table"))
    if args.format in ("machine", "both"):
        _out(args, render_report(report, "machine"))
    if args.figure:
        from .plotting import literal_figure

        literal_figure(literal_probabilities(high, wh, low, wl, m), args.figure,
                       title=f"{os.path.basename(str(args.high))} vs {os.path.basename(str(args.low))}")
    gate = [report[c] for c in GATES[args.gate]]
    if any(v.fails for v in gate):
        return EXIT_FAILS
    if any(v.skipped for v in gate):
        sys.stderr.write("undecided: " + "; ".join(v.reason or "" for v in gate if v.skipped) + "\n")
        return EXIT_ERROR
    return EXIT_HOLDS


def cmd_weaken(args) -> int:
    hdoc, high, wh, ldoc, low, wl, m = _load_triple(args)
    e = _formula(args.evidence, ldoc.vocabulary)
    concrete = concretize(m, e)
    _out(args, f"concretization: {format_formula(concrete)}")
    _out(args, f"weakening: {format_formula(weaken(m, e))}")
    definable = is_definable(m, e)
    _out(args, f"definable: {'true' if definable else 'false'}")
    if args.phi and definable:
        phi = _formula(args.phi, hdoc.vocabulary)
        answer = query_high_level(phi, e, high, wh, low, wl, m, verify=args.verify, cap=args.cap)
        low_value = conditional(m.apply(phi), answer.weakening, low, wl)
        _out(args, f"mode: {answer.mode}")
        _out(args, f"high-level probability: {_number(answer.probability)}")
        _out(args, f"low-level probability given the weakening: {_number(low_value)}")
    return EXIT_HOLDS if definable else EXIT_FAILS


def cmd_derive(args) -> int:
    from .derivation import search, search_all

    ldoc, low, wl = _load_theory(args.low, args.mode)
    space = parse_space(_doc_path(args.space), ldoc.vocabulary)
    results = (search_all(low, wl, space, args.cap, args.limit) if args.all
               else [search(low, wl, space, args.cap, args.limit)])
    found = [r for r in results if r.success]
    if not found:
        tried = results[0].candidates_tried if results else 0
        _out(args, f"failure after {tried} candidates")
        return EXIT_FAILS
    for r in found:
        _out(args, f"success at candidate {r.candidates_tried}")
        _out(args, "  theory: " + ("; ".join(format_formula(s) for s in r.high.sentences) or "(empty)"))
        for p, f in r.mapping.items():
            pos, neg = r.wh.pair(p)
            _out(args, f"  {p} -> {format_formula(f)}    w = {_number(pos)}, w(~) = {_number(neg)}")
    return EXIT_HOLDS


def cmd_props(args) -> int:
    from .properties import SUITES, run_suites

    names = args.suite or list(SUITES)
    results = run_suites(args.seed, args.cases, names)
    for r in results:
        _out(args, r.summary())
    return EXIT_HOLDS if all(r.passed for r in results) else EXIT_FAILS


# ---------------------------------------------------------------------------
# argument parsing


def _cap_default() -> int:
    from .reasoning import default_cap

    return default_cap()


def _flags(suppress: bool) -> argparse.ArgumentParser:
    # Subcommands repeat the global flags with suppressed defaults so that a
    # flag given before the subcommand is not overwritten.
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("rational", "float"), default=d("rational"),
                        help="exact rationals (default) or floating point")
    common.add_argument("--seed", type=int, default=d(0), help="seed for randomized suites")
    common.add_argument("--cap", type=int, default=d(None),
                        help="enumeration cap in atoms (default: $WMCABS_CAP or 24)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _flags(True)
    p = argparse.ArgumentParser(prog="wmc-abs", parents=[_flags(False)],
                                description="Weighted model counting and abstraction checking.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("ground", parents=[common], help="print the grounded sentences")
    g.add_argument("theory")
    g.set_defaults(func=cmd_ground)

    w = sub.add_parser("wmc", parents=[common], help="weighted model count")
    w.add_argument("theory")
    w.add_argument("--phi", help="conjoin this formula first")
    w.add_argument("--method", choices=("dpll", "enumerate"), default="dpll")
    w.set_defaults(func=cmd_wmc)

    q = sub.add_parser("query", parents=[common], help="Pr(phi) or Pr(phi | evidence)")
    q.add_argument("theory")
    q.add_argument("--phi", required=True)
    q.add_argument("--evidence")
    q.set_defaults(func=cmd_query)

    def triple(sp):
        sp.add_argument("--high", required=True)
        sp.add_argument("--low", required=True)
        sp.add_argument("--map", required=True)

    c = sub.add_parser("check", parents=[common], help="classify an abstraction")
    triple(c)
    gate = c.add_mutually_exclusive_group()
    gate.add_argument("--weighted", dest="gate", action="store_const", const="weighted",
                      help="gate the exit status on weighted soundness and completeness")
    gate.add_argument("--exact", dest="gate", action="store_const", const="exact",
                      help="gate on weighted exactness")
    gate.add_argument("--weak", dest="gate", action="store_const", const="weak",
                      help="gate on weak exactness")
    c.set_defaults(gate="sound-complete")
    c.add_argument("--format", choices=("table", "machine", "both"), default="table")
    c.add_argument("--figure", help="write a literal-probability plot to this file")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("weaken", parents=[common], help="concretize and weaken evidence")
    triple(e)
    e.add_argument("--evidence", required=True, help="a single low-level literal")
    e.add_argument("--phi", help="also answer Pr(phi | evidence) at the high level")
    e.add_argument("--verify", action="store_true",
                   help="check weighted exactness before answering")
    e.set_defaults(func=cmd_weaken)

    d = sub.add_parser("derive", parents=[common], help="search a hypothesis space")
    d.add_argument("--low", required=True)
    d.add_argument("--space", required=True)
    d.add_argument("--all", action="store_true", help="list every successful candidate")
    d.add_argument("--limit", type=int, help="examine at most this many candidates")
    d.set_defaults(func=cmd_derive)

    pr = sub.add_parser("props", parents=[common], help="run the randomized property suites")
    pr.add_argument("--cases", type=int, default=200)
    pr.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    pr.set_defaults(func=cmd_props)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is None:
        args.cap = _cap_default()
    try:
        return args.func(args)
    except (WmcAbsError, OSError, KeyError) as exc:
        sys.stderr.write(f"wmc-abs: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Rendering abstraction reports as a table or as a machine-readable document.

The machine format is JSON.  Exact probabilities are written as ``"a/b"``
strings and floats as JSON numbers, so ``parse_machine_report`` rebuilds
an equal report.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .checker import CLASSES, AbstractionReport, Verdict, Witness

FORMATS = ("table", "machine")


def format_number(x) -> str:
    """Terminating decimals print as decimals, other rationals as ``a/b``."""
    if x is None:
        return "-"
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = 0
    while (x * 10 ** digits).denominator != 1:
        digits += 1
    if digits == 0:
        return str(x.numerator)
    return f"{float(x):.{digits}f}" if digits < 15 else _long_decimal(x, digits)


def _long_decimal(x: Fraction, digits: int) -> str:
    scaled = x.numerator * 10 ** digits // x.denominator
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _encode_number(x):
    if x is None:
        return None
    if isinstance(x, float):
        return x
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _decode_number(v):
    if v is None:
        return None
    if isinstance(v, float):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(v)


def witness_text(w: Witness | None) -> str:
    if w is None:
        return ""
    text = w.formula_text()
    if w.high_probability is not None or w.low_probability is not None:
        text += (f"  [Pr high = {format_number(w.high_probability)},"
                 f" Pr low = {format_number(w.low_probability)}]")
    return text


def render_table(report: AbstractionReport) -> str:
    rows = [("class", "verdict", "path", "witness / reason")]
    for name in CLASSES:
        v = report.verdicts.get(name)
        if v is None:
            continue
        detail = witness_text(v.witness) if v.witness else (v.reason or "")
        if v.fails and v.witness and v.witness.kind:
            detail = f"{v.witness.kind}: {detail}"
        rows.append((name, v.status, v.path, detail))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = []
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r[:3], widths)) + "  " + r[3])
    lines.append(f"separable: {'yes' if report.separable else 'no'}")
    lines.append(f"fast path used: {'yes' if report.fast_path_used else 'no'}")
    return "\n".join(l.rstrip() for l in lines) + "\n"


def to_document(report: AbstractionReport) -> dict:
    verdicts = []
    for name in CLASSES:
        v = report.verdicts.get(name)
        if v is None:
            continue
        entry = {"class": name, "status": v.status, "path": v.path, "reason": v.reason}
        if v.witness is not None:
            w = v.witness
            entry["witness"] = {
                "kind": w.kind,
                "literals": list(w.literals),
                "formula": w.formula_text(),
                "highProbability": _encode_number(w.high_probability),
                "lowProbability": _encode_number(w.low_probability),
            }
        else:
            entry["witness"] = None
        verdicts.append(entry)
    return {"separable": report.separable, "fastPathUsed": report.fast_path_used,
            "verdicts": verdicts}


def render_machine(report: AbstractionReport) -> str:
    return json.dumps(to_document(report), indent=2) + "\n"


def render_report(report: AbstractionReport, fmt: str = "table") -> str:
    if fmt == "table":
        return render_table(report)
    if fmt == "machine":
        return render_machine(report)
    raise ValueError(f"unknown report format {fmt!r}; expected one of {FORMATS}")


def from_document(doc: dict) -> AbstractionReport:
    verdicts = {}
    for entry in doc["verdicts"]:
        w = entry.get("witness")
        witness = None
        if w is not None:
            witness = Witness(w["kind"], tuple(w["literals"]),
                              _decode_number(w.get("highProbability")),
                              _decode_number(w.get("lowProbability")))
        verdicts[entry["class"]] = Verdict(entry["status"], witness, entry.get("reason"),
                                           entry.get("path", "exact"))
    return AbstractionReport(verdicts, doc["separable"], doc["fastPathUsed"])


def parse_machine_report(text: str) -> AbstractionReport:
    return from_document(json.loads(text))

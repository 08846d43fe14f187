import json
from pathlib import Path

import pytest

from wmcabs.cli import main
from wmcabs.fixtures import SCENARIOS, scenario
from wmcabs.report import parse_machine_report
from wmcabs.syntax import parse_formula
from wmcabs.wmc import probability

GOLDEN = Path(__file__).parent / "golden"


def triple(name):
    h, l, m = SCENARIOS[name]
    return ["--high", f"fixture:{h}", "--low", f"fixture:{l}", "--map", f"fixture:{m}"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_check_matches_golden_report(capsys, name):
    code, out, _ = run(capsys, "check", *triple(name))
    assert out == (GOLDEN / f"{name}.txt").read_text()
    assert code == (0 if name == "university" else 1)


def test_golden_witness_probabilities_by_enumeration():
    # the weak-exactness witnesses frozen in the golden files
    for name, hi, lo in [("courses", "10/243", "2/97"), ("university_nodiff", "1/30", "1/8")]:
        s = scenario(name)
        r = parse_machine_report(_machine(name))
        w = r["weakExact"].witness
        phi = parse_formula(w.formula_text())
        assert str(probability(phi, s.high, s.wh, method="enumerate", cap=30)) == hi
        assert str(probability(s.mapping.apply(phi), s.low, s.wl, method="enumerate",
                               cap=30)) == lo


def _machine(name):
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        main(["check", "--format", "machine", *triple(name)])
    return buf.getvalue()


def test_check_gates(capsys):
    assert run(capsys, "check", "--exact", *triple("university"))[0] == 0
    code, out, _ = run(capsys, "check", "--exact", *triple("courses"))
    assert code == 1
    assert "CS(B)" in out and "~Fieldwork(B)" in out
    assert run(capsys, "check", "--weak", *triple("pq"))[0] == 0
    assert run(capsys, "check", "--weighted", *triple("pq"))[0] == 1


def test_check_undecided_exits_2(capsys):
    code, _, err = run(capsys, "--cap", "3", "check", *triple("university"))
    assert code == 2 and err.startswith("undecided:")
    # a flag after the subcommand works the same way
    assert run(capsys, "check", "--cap", "3", *triple("university"))[0] == 2


def test_check_machine_and_figure(capsys, tmp_path):
    fig = tmp_path / "out.png"
    code, out, _ = run(capsys, "check", "--format", "machine", "--figure", str(fig),
                       *triple("university"))
    assert code == 0
    doc = json.loads(out)
    assert {v["status"] for v in doc["verdicts"]} == {"holds"}
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_check_both_formats(capsys):
    code, out, _ = run(capsys, "check", "--format", "both", *triple("pq"))
    table, _, machine = out.partition("fast path used: no\n")
    assert "complete" in table
    assert parse_machine_report(machine)["complete"].fails


def test_float_mode(capsys):
    code, out, _ = run(capsys, "--mode", "float", "check", "--exact", *triple("university"))
    assert code == 0
    code, out, _ = run(capsys, "--mode", "float", "query", "fixture:university_low",
                       "--phi", "diff(B,E)")
    assert abs(float(out) - 0.7) < 1e-9


def test_query_and_wmc(capsys):
    assert run(capsys, "query", "fixture:university_low", "--phi", "diff(B,E)")[1] == "0.7\n"
    code, out, _ = run(capsys, "query", "fixture:university_low", "--phi", "grades(A,B,7)",
                       "--evidence", "takes(A,B) & iq(A,L) & diff(B,E)")
    assert out == "0.25\n"
    assert run(capsys, "wmc", "fixture:university_low")[1] == "4\n"
    assert run(capsys, "wmc", "fixture:university_low", "--method", "enumerate",
               "--cap", "25")[1] == "4\n"
    # 25 atoms exceed the default enumeration cap
    assert run(capsys, "wmc", "fixture:university_low", "--method", "enumerate")[0] == 2


def test_ground(capsys):
    code, out, _ = run(capsys, "ground", "fixture:pq_high")
    assert code == 0 and out.splitlines() == ["s | r", "p | q"]


def test_weaken(capsys):
    code, out, _ = run(capsys, "weaken", *triple("university"), "--evidence", "diff(B,M)",
                       "--phi", "iq(A,L) & takes(A,B) & grades(A,B,O)", "--verify")
    assert code == 0
    lines = out.splitlines()
    assert lines[:3] == ["concretization: diff(B,N)", "weakening: diff(B,M) | diff(B,H)",
                         "definable: true"]
    assert "mode: weakened" in lines
    assert "high-level probability: 0.125" in lines
    assert "low-level probability given the weakening: 0.125" in lines


def test_weaken_without_counterpart(capsys):
    code, _, err = run(capsys, "weaken", *triple("university"), "--evidence", "~diff(B,M)")
    assert code == 2 and "wmc-abs: error:" in err


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "--low", "fixture:university_low",
                       "--space", "fixture:university_space")
    assert code == 0
    assert out.splitlines()[0] == "success at candidate 10"
    assert "  theory: (empty)" in out
    assert "diff(B,E) -> diff(B,E)    w = 0.7, w(~) = 0.3" in out
    code, out, _ = run(capsys, "derive", "--low", "fixture:university_low",
                       "--space", "fixture:university_space", "--limit", "3")
    assert code == 1 and out == "failure after 3 candidates\n"


def test_props(capsys):
    code, out, _ = run(capsys, "props", "--cases", "10", "--suite", "wmc-laws",
                       "--suite", "isomorphism")
    assert code == 0
    assert [l.split()[0] for l in out.splitlines()] == ["PASS", "PASS"]


def test_errors(capsys, tmp_path):
    code, _, err = run(capsys, "query", str(tmp_path / "none.yaml"), "--phi", "a")
    assert code == 2 and err.startswith("wmc-abs: error:")
    bad = tmp_path / "bad.yaml"
    bad.write_text("predicates: {a: []}\nsentences:\n  - {atom: [b]}\n")
    code, _, err = run(capsys, "query", str(bad), "--phi", "a")
    assert code == 2 and f"{bad}:3:" in err
    code, _, err = run(capsys, "query", "fixture:nosuch", "--phi", "a")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["check"])

"""Command-line interface: subcommands, exit codes, determinism."""

from __future__ import annotations

import pathlib

import pytest

from guardedsat.cli import EXIT_ERROR, EXIT_NO, EXIT_YES, main
from guardedsat.syntax import parse_formula

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def _fx(name):
    return str(FIXTURES / name)


@pytest.mark.parametrize("fixture,code", [
    ("trivial_yes.p", EXIT_YES),
    ("trivial_no.p", EXIT_NO),
    ("until.p", EXIT_YES),
    ("until_no.p", EXIT_NO),
])
def test_answer_exit_codes(fixture, code):
    assert main(["answer", _fx(fixture)]) == code


def test_answer_prints_verdict(capsys):
    main(["answer", _fx("trivial_yes.p")])
    assert capsys.readouterr().out.strip() == "Yes"
    main(["answer", _fx("trivial_no.p")])
    assert capsys.readouterr().out.strip() == "No"


def test_answer_trace_file(tmp_path, capsys):
    out = tmp_path / "trace.log"
    main(["answer", _fx("until.p"), "--trace", str(out)])
    capsys.readouterr()
    text = out.read_text()
    assert "[1] input" in text
    assert "[]" in text  # ends with the empty clause


def test_answer_is_deterministic(tmp_path, capsys):
    traces = []
    for i in range(2):
        out = tmp_path / f"t{i}.log"
        main(["answer", _fx("until.p"), "--trace", str(out)])
        capsys.readouterr()
        traces.append(out.read_bytes())
    assert traces[0] == traces[1]


def test_missing_file_is_an_input_error(capsys):
    assert main(["answer", "/nonexistent/nope.p"]) == EXIT_ERROR
    assert capsys.readouterr().err.strip()


def test_parse_error_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.p"
    bad.write_text("rule: this is not ( a formula.")
    assert main(["answer", str(bad)]) == EXIT_ERROR
    assert capsys.readouterr().err.strip()


def test_unknown_subcommand_is_an_input_error(capsys):
    assert main(["frobnicate", _fx("trivial_yes.p")]) == EXIT_ERROR
    capsys.readouterr()


def test_rewrite_emits_parseable_formula(capsys):
    code = main(["rewrite", _fx("thm13_02.p")])
    out = capsys.readouterr().out
    assert code == EXIT_NO
    assert out.startswith("formula: ") and out.rstrip().endswith(".")
    parse_formula(out[len("formula: "):].rstrip().rstrip("."))


def test_rewrite_to_file(tmp_path, capsys):
    dest = tmp_path / "sigma_q.p"
    code = main(["rewrite", _fx("thm13_03.p"), "-o", str(dest)])
    capsys.readouterr()
    assert code == EXIT_NO
    text = dest.read_text()
    assert text.startswith("formula: ")
    # no Skolem function survives unskolemisation
    assert "sk" not in text


def test_rewrite_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        main(["rewrite", _fx("thm13_05.p")])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_clausify_lists_origins(capsys):
    code = main(["clausify", _fx("until.p")])
    out = capsys.readouterr().out
    assert code == EXIT_NO
    lines = [l for l in out.splitlines() if l.strip()]
    assert all("% origin:" in l for l in lines)
    assert any("% origin: query" in l for l in lines)
    assert any("% origin: rule" in l for l in lines)


def test_classify_reports_query_structure(capsys):
    code = main(["classify", _fx("q1.p")])
    out = capsys.readouterr().out
    assert code == EXIT_NO
    assert "chained: X2 X3 X5" in out
    assert "isolated: X1 X4 X6" in out
    assert "acyclic: yes" in out

    main(["classify", _fx("q2.p")])
    out = capsys.readouterr().out
    assert "acyclic: no" in out


def test_saturate_streams_steps(capsys):
    code = main(["saturate", _fx("trivial_yes.p")])
    out = capsys.readouterr().out
    assert code == EXIT_NO
    assert "[1] input" in out
    assert "% verdict: yes" in out

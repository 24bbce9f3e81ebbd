import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qkquotient.cli import main
from qkquotient.report import (
    ParseError,
    ShapeError,
    format_matrix,
    parse_matrix,
    parse_seeds,
    run_catalog,
    run_check,
    run_sample,
    to_json,
    to_text,
)
from qkquotient.weights import OmegaMatrix, ThetaMatrix

THETA1_TEXT = "1 0 1 1; 0 1 1 1; 1 1 0 1"
NOT_FREE = "1 0 1 1; 0 1 1 1; 1 1 0 0"


def test_parse_examples():
    m = parse_matrix(THETA1_TEXT)
    assert isinstance(m, ThetaMatrix) and m.tolist() == [[1, 0, 1, 1], [0, 1, 1, 1], [1, 1, 0, 1]]
    assert parse_matrix("1 0 1\n0 1 1\n") == OmegaMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    assert parse_matrix("  -3 0 1 ;\n 2 5 -7  ").tolist() == [[-3, 0, 1], [2, 5, -7]]


@pytest.mark.parametrize(
    "text, exc",
    [
        ("1 0 x 1; 0 1 1 1; 1 1 0 1", ParseError),
        ("1 0 1.5; 0 1 1", ParseError),
        ("1 0 1 1; 0 1 1; 1 1 0 1", ShapeError),
        ("1 2; 3 4", ShapeError),
        ("", ShapeError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_matrix(text)


@given(st.lists(st.lists(st.integers(-99, 99), min_size=4, max_size=4), min_size=3, max_size=3))
def test_format_parse_round_trip(rows):
    m = ThetaMatrix.from_rows(rows)
    assert parse_matrix(format_matrix(m)) == m


def test_parse_seeds():
    assert parse_seeds("0-3,7") == [0, 1, 2, 3, 7]
    assert parse_seeds("5") == [5]
    for bad in ("", "3-1", "a", "-2"):
        with pytest.raises(ValueError):
            parse_seeds(bad)


def test_json_is_deterministic_and_exact():
    rep = run_catalog(parse_matrix(THETA1_TEXT))
    a, b = to_json(rep), to_json(run_catalog(parse_matrix(THETA1_TEXT)))
    assert a == b and a.endswith("\n")
    data = json.loads(a)
    assert data["schema"] == 1
    first = data["catalog"]["type1_spheres"][0]
    assert first["label"] == "S^(+,+)_(+,+,-)"
    assert Fraction(first["exact_data"]["x_4"]) == Fraction(1, 5)
    assert data["catalog"]["counts"] == {"spheres": 8, "points": 12}


def test_check_report_fields():
    rep = run_check(parse_matrix(THETA1_TEXT))
    assert rep["minors"] == {"123": -2, "124": -1, "134": 1, "234": -1}
    assert rep["boxes"]["+++"] == -1
    assert rep["null_vector"] == [-1, -1, -1, 2]
    assert rep["ok"] and not rep["free"]["ok"]
    bad = run_check(parse_matrix(NOT_FREE))
    assert not bad["ok"]
    assert "D134" in bad["admissible"]["failed_condition"]


def test_sample_report_floats_are_strings():
    rep = run_sample(parse_matrix(THETA1_TEXT), [0, 1])
    assert rep["converged"] == 2
    data = json.loads(to_json(rep))
    assert float(data["runs"][0]["residual"]) < 1e-10
    assert float(data["runs"][0]["residual_after_action"]) < 1e-9


def test_text_rendering_mentions_sections():
    text = to_text(run_catalog(parse_matrix(THETA1_TEXT)))
    assert "S^(+,+)_(+,+,-)" in text
    assert "S^{12}_{34}" in text


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_check_ok(capsys):
    code, out, _ = run_cli(["check", THETA1_TEXT, "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["command"] == "check"


def test_cli_not_admissible_exit_one(capsys):
    code, out, _ = run_cli(["catalog", NOT_FREE], capsys)
    assert code == 1 and out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["check"],
        ["check", "1 2; 3 4"],
        ["check", "1 x 1 1; 0 1 1 1; 1 1 0 1"],
        ["sample", THETA1_TEXT, "--seeds", "9-1"],
        ["sample", THETA1_TEXT, "--tol", "0"],
        ["check", THETA1_TEXT, "--matrix-file", "m.txt"],
        ["check", "--matrix-file", "/nonexistent/matrix.txt"],
    ],
)
def test_cli_usage_errors(argv, capsys):
    code, _, err = run_cli(argv, capsys)
    assert code == 2 and err


def test_cli_matrix_file(tmp_path, capsys):
    f = tmp_path / "m.txt"
    f.write_text("1 1 -1\n0 2 3\n")
    code, out, _ = run_cli(["catalog", "--matrix-file", str(f), "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["catalog"]["omega_sphere"][0]["isotropy_invariant"] == 10


def test_cli_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(THETA1_TEXT))
    code, out, _ = run_cli(["check", "--matrix-file", "-", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["minors"]["123"] == -2


def test_cli_sample_seeds(capsys):
    code, out, _ = run_cli(["sample", THETA1_TEXT, "--seeds", "0-2", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["seeds"] == [0, 1, 2]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qkquotient", "check", "1 0 1; 0 1 1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout

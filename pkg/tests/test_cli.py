import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpairs.algebra import (
    MatrixFormatError,
    format_basis,
    format_matrix,
    format_poly,
    make_field,
    parse_basis,
    parse_matrices,
    parse_matrix,
    parse_poly,
)
from fatpairs.cli import main

from helpers import field_strategy, matrices, polys

SCHEMA = json.loads(resources.files("fatpairs").joinpath("data/report.schema.json").read_text())

ORDER8 = "3 3 1\n1 0 0\n0 0 1\n0 1 2\n"
G0 = "3 2 1\n1 0 0\n0 0 1\n0 1 1\n"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


# -- text format ----------------------------------------------------------------------


@given(st.data())
def test_matrix_text_round_trip(data):
    F = data.draw(field_strategy())
    d = data.draw(st.integers(1, 5))
    A = data.draw(matrices(F, d))
    assert parse_matrix(format_matrix(A)) == A
    B = data.draw(matrices(F, d))
    assert parse_matrices(format_matrix(A) + "\n" + format_matrix(B)) == [A, B]


@given(st.data())
def test_poly_and_basis_round_trip(data):
    F = data.draw(field_strategy())
    f = data.draw(polys(F))
    assert parse_poly(F, format_poly(f)) == f
    rows = ((1, 0, 2 % F.q), (0, 1, 1))
    assert parse_basis(format_basis(F, 3, rows)) == (F, 3, list(rows))


def test_extension_field_header_includes_modulus():
    F = make_field(3, 2)
    text = "2 3 2\n1 0 1\n1 4\n0 8\n"
    A = parse_matrix(text)
    assert A.field == F and format_matrix(A) == text


@pytest.mark.parametrize(
    "text,line",
    [
        ("3 2 1\n1 0 0\n0 0 x\n0 1 1\n", 3),
        ("3 2 1\n1 0 0\n0 0\n0 1 1\n", 3),
        ("3 2 1\n1 0 0\n0 0 2\n0 1 1\n", 3),
        ("2 3 2\n1 1 1\n1 0\n0 1\n", 2),
        ("3 4 1\n", 1),
        ("3 2 1\n1 0 0\n", 3),
    ],
)
def test_malformed_matrix_reports_line(text, line):
    with pytest.raises(MatrixFormatError) as exc:
        parse_matrices(text)
    assert exc.value.line == line


# -- commands -------------------------------------------------------------------------


def test_fatcheck_order8(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text(ORDER8)
    code, doc = run_json(["fatcheck", "--matrix", str(m)], capsys)
    assert code == 0
    assert doc["is_fat"] is True and doc["e"] == 2 and doc["is_ppd"] is False


def test_fatcheck_ppd_flag(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("4 2 1\n0 1 0 0\n0 0 1 0\n0 0 0 1\n1 1 0 0\n")
    code, doc = run_json(["fatcheck", "--matrix", str(m), "--ppd", "4"], capsys)
    assert code == 0 and doc["is_ppd"] is True and doc["witness_primes"] == [5]


def test_gaussian_command(capsys):
    code, doc = run_json(["gaussian", "--d", "4", "--w", "2", "--q", "2"], capsys)
    assert code == 0 and doc["value"] == 35
    code, doc = run_json(["gaussian", "--d", "2", "--w", "1", "--q", "9=3^2"], capsys)
    assert doc["value"] == 10 and doc["q"] == 9


def test_bounds_command(capsys):
    code, doc = run_json(["bounds", "--d", "3", "--q", "2"], capsys)
    assert code == 0
    assert doc["cells"][0]["fat_bound"] == {"num": 1, "den": 18}


def test_exact_command(capsys):
    code, doc = run_json(["exact", "--group", "gl", "--d", "3", "--q", "2"], capsys)
    assert code == 0
    r = next(r for r in doc["reports"] if r["statistic"] == "red_and_fat")
    assert r["bound"] == {"num": 1, "den": 4} and r["holds"] is True
    assert r["value"] == {"num": 1, "den": 36}


def test_exact_byte_identical(capsys):
    argv = ["exact", "--group", "sl", "--d", "2", "--q", "5"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_mc_byte_identical_and_seed_required(capsys):
    argv = ["mc", "--group", "gl", "--d", "3", "--q", "3", "--pairs", "1500", "--seed", "9"]
    code, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert code == 0 and a == b
    jsonschema.validate(json.loads(a), SCHEMA)
    code, _, err = run(argv[:-2], capsys)
    assert code == 1 and "--seed" in err


def test_exact_cap_suggests_mc(capsys):
    code, _, err = run(["exact", "--group", "gl", "--d", "4", "--q", "3"], capsys)
    assert code == 1 and "--cap" in err and "mc" in err


def test_csv_output(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = run(["exact", "--d", "3", "--q", "2", "--format", "csv", "--output", str(out)], capsys)
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0].startswith("statistic,group,cell")
    assert any(line.startswith("red_and_fat,") and ",1,36," in line for line in lines)


def test_reduce_command_round_trip(tmp_path, capsys):
    pair = tmp_path / "pair.txt"
    pair.write_text(G0 + "\n" + G0)
    induced = tmp_path / "induced.txt"
    code, doc = run_json(["reduce", "--pair", str(pair), "--induced-out", str(induced)], capsys)
    assert code == 0
    cert = doc["certificate"]
    assert cert["ok"] and cert["n"] == 2 and cert["Y"] == []
    mats = parse_matrices(doc["induced_pair_text"])
    assert [list(map(list, m.rows)) for m in mats] == cert["induced_pair"]
    assert induced.read_text() == doc["induced_pair_text"]
    assert parse_matrices(format_matrix(mats[0]) + "\n" + format_matrix(mats[1])) == mats


@pytest.mark.parametrize(
    "argv",
    [
        ["gaussian", "--d", "4", "--w", "2", "--q", "6"],
        ["gaussian", "--d", "4", "--w", "2", "--q", "2", "--bogus"],
        ["exact", "--group", "weird", "--d", "3", "--q", "2"],
        ["exact", "--d", "3", "--q", "2", "--cap", "0"],
        ["mc", "--d", "3", "--q", "2", "--pairs", "10", "--seed", "1"],
        ["fatcheck", "--matrix", "/nonexistent/m.txt"],
        ["nosuchcommand"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1 and err.startswith("error:")


def test_malformed_file_names_line(tmp_path, capsys):
    m = tmp_path / "bad.txt"
    m.write_text("3 2 1\n1 0 0\n0 0 x\n0 1 1\n")
    code, _, err = run(["fatcheck", "--matrix", str(m)], capsys)
    assert code == 1 and "line 3" in err


def test_bound_violation_exits_2(monkeypatch, capsys):
    from fractions import Fraction

    import fatpairs.proportions as pr

    # shrink the per-cell bound to zero so the exact run reports a violation
    monkeypatch.setattr(pr, "cell_bound", lambda e1, e2, d, F: Fraction(0))
    code, out, err = run(["exact", "--d", "3", "--q", "2"], capsys)
    assert code == 2 and "bound violated" in err and "1/36" in err
    assert json.loads(out)["all_hold"] is False


def test_verify_quick_subset(capsys):
    code, doc = run_json(["verify", "--level", "quick", "--seed", "42", "--criteria", "1,4,6,7,12"], capsys)
    assert code == 0 and doc["passed"] and [c["number"] for c in doc["criteria"]] == [1, 4, 6, 7, 12]


def test_console_entry_point_runs():
    r = subprocess.run(
        [sys.executable, "-m", "fatpairs.cli", "gaussian", "--d", "3", "--w", "1", "--q", "2"],
        capture_output=True, text=True, check=False,
    )
    assert r.returncode == 0 and json.loads(r.stdout)["value"] == 7

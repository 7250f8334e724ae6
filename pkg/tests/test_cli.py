import csv
import io
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path

import pytest

from okounkov_lab.cli import EXIT_CAP_EXCEEDED, EXIT_CHECK_FAILED, EXIT_OK, EXIT_SPEC_ERROR, main
from okounkov_lab.tables import parse_rational

SPECS = Path(__file__).resolve().parent.parent / "specs"


def _rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_volume_converges_to_one(tmp_path):
    assert main(["volume", str(SPECS / "p2_o1.toml"), "--mmax", "200", "--out", str(tmp_path)]) == EXIT_OK
    text = (tmp_path / "volume_count.csv").read_text()
    assert "# command: volume" in text
    assert "# caps: mmax=200 tol=None" in text
    rows = _rows(text)
    last = rows[-1]
    assert last["m"] == "200"
    assert parse_rational(last["value"]) == Fraction(201 * 202, 200 ** 2)
    assert parse_rational(last["target"]) == 1
    assert parse_rational(last["residual"]) == abs(parse_rational(last["value"]) - 1)
    assert float(last["decimal"]) == pytest.approx(float(Fraction(201 * 202, 200 ** 2)))


def test_volume_tolerance_failure(capsys):
    assert main(["volume", str(SPECS / "p2_o1.toml"), "--mmax", "20", "--tol", "1/100"]) == EXIT_CHECK_FAILED
    assert main(["volume", str(SPECS / "p2_o1.toml"), "--mmax", "20", "--tol", "1/5"]) == EXIT_OK


def test_body_svg(tmp_path):
    assert main(["body", str(SPECS / "floor57.toml"), "--mmax", "14", "--out", str(tmp_path)]) == EXIT_OK
    svg = (tmp_path / "body_body.svg").read_text()
    ET.fromstring(svg)
    assert "(5/7, 2/7)" in svg
    rows = _rows((tmp_path / "body_vertices.csv").read_text())
    assert {(r["x1"], r["x2"]) for r in rows} == {("0/1", "0/1"), ("0/1", "1/1"), ("5/7", "0/1"), ("5/7", "2/7")}


def test_star_squares(tmp_path):
    assert main(["star", str(SPECS / "squares.toml"), "--pmax", "20", "--out", str(tmp_path)]) == EXIT_OK
    ET.fromstring((tmp_path / "star_staircase.svg").read_text())
    summary = {r["quantity"]: r["value"] for r in _rows((tmp_path / "star_summary.csv").read_text())}
    assert summary["witness"] == "0;0"
    assert summary["stabilized"] == "true"


def test_fujita_floor(capsys):
    assert main(["fujita", str(SPECS / "floor57.toml"), "--eps", "1/100", "--kcap", "10"]) == EXIT_OK
    out = capsys.readouterr().out
    summary = out.split("# table: summary")[1]
    assert "p0,7/1" in summary


def test_fujita_unreachable():
    assert main(["fujita", str(SPECS / "floor57.toml"), "--eps", "1/100", "--pcap", "3", "--kcap", "10"]) == EXIT_CHECK_FAILED


def test_cap_exceeded_is_partial(tmp_path):
    assert main(["volume", str(SPECS / "even_degrees.toml"), "--out", str(tmp_path)]) == EXIT_CAP_EXCEEDED
    rows = _rows((tmp_path / "volume_count.csv").read_text())
    assert [r["m"] for r in rows] == ["2", "4"]


def test_spec_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('name = "x"\ndim = 1\nmode = "explicit"\n[explicit.degrees]\n1 = [[1]]\n2 = [[0]]\n')
    assert main(["volume", str(bad)]) == EXIT_SPEC_ERROR
    assert "bad.toml:4: multiplicativity fails: (k, l, exponent) = (1, 1, (2,))" in capsys.readouterr().err
    assert main(["audit", str(bad)]) == EXIT_CHECK_FAILED


def test_wrong_kind_of_series():
    assert main(["multigraded", str(SPECS / "squares.toml")]) == EXIT_SPEC_ERROR
    assert main(["volume", str(SPECS / "pair_o1_floor57.toml")]) == EXIT_SPEC_ERROR


def test_missing_file():
    assert main(["volume", "/nonexistent/spec.toml"]) == EXIT_SPEC_ERROR


def test_valuation(capsys):
    assert main(["valuation", str(SPECS / "squares.toml"), "--weights", "1,0", "--pmax", "10"]) == EXIT_OK


def test_restrict(capsys):
    assert main(["restrict", str(SPECS / "p3_o2.toml"), "--mmax", "20"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out.split("# table: hull")[0])
    assert parse_rational(rows[-1]["target"]) == 4


def test_multigraded_small(tmp_path):
    code = main(["multigraded", str(SPECS / "linear_p1.toml"), "--grid", "1,1;1,2;2,1",
                 "--pcap", "3", "--truncation", "30", "--out", str(tmp_path)])
    assert code == EXIT_OK
    fibers = _rows((tmp_path / "multigraded_fibers.csv").read_text())
    assert [(r["a"], r["volume"]) for r in fibers] == [("1;1", "3/1"), ("1;2", "5/1"), ("2;1", "4/1")]


def test_every_rational_reparses(tmp_path):
    main(["volume", str(SPECS / "squares.toml"), "--mmax", "30", "--out", str(tmp_path)])
    for path in tmp_path.glob("*.csv"):
        for row in _rows(path.read_text()):
            if row.get("value") and "/" in row["value"]:
                x = parse_rational(row["value"])
                assert f"{x.numerator}/{x.denominator}" == row["value"]

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hopfmono import cli
from hopfmono.operators import X1, X3
from hopfmono.symalg import R, approx_equal


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_trivial_sector(capsys):
    code, out, _ = run(capsys, "verify", "--kappa-max", "0", "--samples", "20000")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("verdict: pass")


def test_verify_unreachable_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--kappa-max", "1", "--tol", "1e-30", "--samples", "20000")
    assert code == 1
    assert "FAIL" in out


@pytest.mark.parametrize(
    "argv",
    [["verify", "--kappa-max", "-1"], ["verify", "--tol", "-1"], ["verify", "--delta", "a,b"], ["nope"]],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_verify_json_schema(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--kappa-max", "1", "--delta", "1", "--samples", "20000",
                       "--format", "json", "--out", str(path))
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"verdict", "seed", "records"}
    assert report["verdict"] == "pass" and report["seed"] == 42
    for rec in report["records"]:
        assert set(rec) == {"name", "eq", "kappa", "delta", "max_dev", "tol", "pass"}
    assert {r["delta"] for r in report["records"] if r["kappa"] == 1} <= {0, 1}
    assert path.read_text() == out


def test_verify_reports_are_byte_identical(capsys):
    argv = ["verify", "--kappa-max", "1", "--samples", "20000", "--seed", "5", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def _rows(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == cli.COLUMNS
    return np.array([[float(v) for v in row] for row in rows[1:]])


def test_field_shell_is_radial(capsys):
    code, out, _ = run(capsys, "field", "--kappa", "2", "--delta", "0")
    assert code == 0
    rows = _rows(out)
    assert rows.shape == (100, 9)
    x, b = rows[:, :3], rows[:, 6:]
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0)
    assert np.max(np.linalg.norm(np.cross(x, b), axis=1)) < 1e-12
    assert np.allclose(b, -x)


def test_field_trivial_sector_is_zero(capsys):
    _, out, _ = run(capsys, "field", "--kappa", "0")
    assert np.all(_rows(out)[:, 3:] == 0)


def test_field_delta_changes_a_not_b(capsys):
    _, a, _ = run(capsys, "field", "--kappa", "2", "--delta", "0")
    _, b, _ = run(capsys, "field", "--kappa", "2", "--delta", "2")
    a, b = _rows(a), _rows(b)
    assert np.array_equal(a[:, 6:], b[:, 6:])
    assert np.max(np.abs(a[:, 3:6] - b[:, 3:6])) > 0.1


def test_field_json_and_out_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    code, out, _ = run(capsys, "field", "--kappa", "1", "--delta", "1", "--n-theta", "3", "--n-phi", "4",
                       "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    assert len(data) == 12 and set(data[0]) == set(cli.COLUMNS)


def test_field_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "field", "--kappa", "1", "--out", str(tmp_path / "missing" / "f.csv"))
    assert code == 1 and "error" in err


def _state_rows(out):
    lines = out.strip().splitlines()
    assert lines[0] == "r,theta,phi,gamma,re,im,density,density_k0"
    return [[float(v) for v in line.split(",")] for line in lines[1:]]


def test_state_density_is_that_of_plain_state(capsys):
    code, out, _ = run(capsys, "state", "--phi", "x3", "--kappa", "2", "--point", "1,0.1,0.4,0.9")
    assert code == 0
    (row,) = _state_rows(out)
    assert row[6] == pytest.approx(math.cos(0.1) ** 2, rel=1e-12)


def test_state_constant_in_trivial_sector(capsys):
    code, out, _ = run(capsys, "state", "--phi", "1", "--point", "2,1,0", "--point", "0.5,2,1,3")
    assert code == 0
    for row in _state_rows(out):
        assert (row[4], row[5]) == (1.0, 0.0)


def test_state_semi_string_is_finite_off_string(capsys):
    code, out, _ = run(capsys, "state", "--phi", "r^-1", "--kappa", "1", "--delta", "1", "--point", "2,0.5,1,0.2")
    assert code == 0
    (row,) = _state_rows(out)
    assert all(math.isfinite(v) for v in row)
    assert row[6] == pytest.approx(0.25)


@pytest.mark.parametrize("argv", [["--phi", "x4"], ["--phi", "x1^-1"], ["--phi", "x3", "--point", "1,2"]])
def test_state_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, "state", *argv)
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize(
    "text, want",
    [
        ("x3", X3),
        ("2*x1^2 - r^-1", 2 * X1 * X1 - R**-1),
        ("2 x1^2 r^-1", 2 * X1 * X1 * R**-1),
        ("-x1 + 0.5j x3 x3", -1 * X1 + 0.5j * X3 * X3),
        ("1.5e1", 15 * X3**0),
    ],
)
def test_parse_phi(text, want):
    assert approx_equal(cli.parse_phi(text).to_symfunc(), want)


@pytest.mark.parametrize("text", ["", "x1^", "x1 + ", "x1^-2", "y", "x1^1.5"])
def test_parse_phi_rejects(text):
    with pytest.raises(cli.PhiParseError):
        cli.parse_phi(text)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hopfmono", "state", "--phi", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].split(",")[4:6] == ["1", "0"]

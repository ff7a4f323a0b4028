import subprocess
import sys

import numpy as np
import pytest

from qdisloc.analytic import energy
from qdisloc.cli import main
from qdisloc.params import QuantumNumbers
from qdisloc.sweep import read_csv

from conftest import FIG1_L, FIG1_PARAMS, FIG1_POTENTIAL

FIG1_FLAGS = "--m 1 --Q 1 --lambda 1 --Cm 1 --beta 0.5 --k 0.5 --l 1".split()
CASE2 = ["--case", "2", *FIG1_FLAGS, "--C1", "1", "--C2", "1", "--C3", "1"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _table(out):
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    head = lines[0].split("\t")
    return [dict(zip(head, ln.split("\t"))) for ln in lines[1:]]


def test_spectrum_fig1(capsys):
    code, out, _ = run(capsys, "spectrum", *CASE2, "--n", "1", "2", "3")
    assert code == 0
    rows = _table(out)
    assert [int(r["n"]) for r in rows] == [1, 2, 3]
    for r in rows:
        # printed at 17 significant digits: bit-exact round trip
        assert float(r["energy"]) == energy(FIG1_PARAMS, FIG1_POTENTIAL, QuantumNumbers(int(r["n"]), FIG1_L))
    assert round(float(rows[0]["energy"]), 4) == 8.3702
    assert rows[0]["bound_condition"] == "satisfied"
    assert "tau" in out.splitlines()[1]


def test_spectrum_case1_bound_violation(capsys):
    code, out, err = run(capsys, "spectrum", "--case", "1", *FIG1_FLAGS, "--n", "0")
    assert code == 2
    assert "(l - beta*k)^2 > 2*m*Q*lambda" in err
    assert "BoundConditionViolated" in err
    assert out == ""


def test_spectrum_no_confinement(capsys):
    code, _, err = run(capsys, "spectrum", "--case", "1", "--Q", "0", "--l", "1")
    assert code == 2
    assert "NoConfinement" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--case", "1", "--C1", "1"],
        ["spectrum", "--case", "3"],
        ["spectrum", "--Q", "abc"],
        ["spectrum", "--m", "-1"],
        ["spectrum", "--m", "nan"],
        ["frobnicate"],
        [],
        ["sweep", "--param", "Q", "--from", "3", "--to", "0.5"],
        ["sweep", "--param", "m", "--from", "0", "--to", "1"],
        ["validate", "--points", "10"],
        ["spectrum", "--case", "2", "--C1", "nan"],
        ["spectrum", "--n", "-1"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_case2_coefficients_default_to_zero(capsys):
    code, out, _ = run(capsys, "spectrum", "--case", "2", "--l", "1", "--n", "0")
    code1, out1, _ = run(capsys, "spectrum", "--case", "1", "--l", "1", "--n", "0")
    assert code == code1 == 0
    assert _table(out)[0]["energy"] == _table(out1)[0]["energy"]


def _wavefunction(tmp_path, capsys, n):
    path = tmp_path / f"wf{n}.csv"
    code, _, _ = run(capsys, "wavefunction", *CASE2, "--n", n, "--out", path)
    assert code == 0
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert len(data) == 2001
    return data


@pytest.mark.parametrize("n, changes", [(0, 0), (2, 2)])
def test_wavefunction_profile(tmp_path, capsys, n, changes):
    rho, psi, dens = _wavefunction(tmp_path, capsys, n).T
    assert 0.999 <= np.trapezoid(dens, rho) <= 1.001
    nz = psi[np.abs(psi) > 1e-12 * np.abs(psi).max()]
    assert np.count_nonzero(np.sign(nz[1:]) != np.sign(nz[:-1])) == changes
    if n == 0:
        peak = np.argmax(psi)
        assert np.all(np.diff(psi[: peak + 1]) >= 0) and np.all(np.diff(psi[peak:]) <= 0)


def test_wavefunction_stdout(capsys):
    code, out, _ = run(capsys, "wavefunction", "--l", "1", "--samples", "5", "--rho-max", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "rho,psi,density" and len(lines) == 6


def test_validate_fig1(capsys):
    code, out, _ = run(capsys, "validate", *CASE2, "--nmax", "3")
    assert code == 0
    rows = _table(out)
    assert len(rows) == 4
    assert max(float(r["rel_err"]) for r in rows) < 1e-6


def test_validate_detects_wrong_beta(capsys):
    code, _, err = run(capsys, "validate", *CASE2, "--oracle-beta", "0.7")
    assert code == 3
    assert "FAIL: worst n=" in err


def test_validate_oscillator_order(capsys):
    code, out, _ = run(capsys, "validate", "--l", "1")
    assert code == 0
    line = next(ln for ln in out.splitlines() if ln.startswith("# observed order"))
    lo, hi = (float(x) for x in line.split()[3::2])
    assert 1.9 < lo <= hi < 2.1


def test_sweep_files(tmp_path, capsys):
    csv_path, svg_path = tmp_path / "f1.csv", tmp_path / "f1.svg"
    code, out, _ = run(capsys, "sweep", *CASE2, "--param", "Q", "--from", "0.5", "--to", "3",
                       "--csv", csv_path, "--plot", svg_path)
    assert code == 0
    assert out.startswith("rows=78 gaps=")
    assert csv_path.exists() and svg_path.read_text().count("<polyline") == 3


def test_sweep_verify(tmp_path, capsys):
    csv_path = tmp_path / "f2.csv"
    code, out, _ = run(capsys, "sweep", *CASE2, "--param", "Cm", "--from", "0.5", "--to", "3",
                       "--steps", "6", "--verify", "--csv", csv_path)
    assert code == 0
    rows = read_csv(csv_path)
    assert all(r.rel_err is not None for r in rows)
    assert max(r.rel_err for r in rows) < 1e-6
    assert "max_rel_err=n/a" not in out


def test_sweep_all_invalid_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", *CASE2, "--param", "Q", "--from", "2", "--to", "3",
                       "--csv", tmp_path / "x.csv")
    assert code == 2
    assert "AllPointsInvalid" in err


def test_sweep_output_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QDISLOC_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "sweep", *CASE2, "--param", "Cm", "--from", "1", "--to", "2",
                     "--steps", "3", "--csv", "env.csv", "--plot", "env.svg")
    assert code == 0
    assert (tmp_path / "env.csv").exists() and (tmp_path / "env.svg").exists()


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", *CASE2, "--param", "Cm", "--from", "1", "--to", "2",
                       "--csv", tmp_path / "nope" / "x.csv")
    assert code == 1
    assert "nope" in err


def test_config_defaults_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "fig1.cfg"
    cfg.write_text("# Fig. 1 style inputs\ncase = 2\nm=1\nQ=1\nlambda=1\nCm=1\nbeta=0.5\nk=0.5\nl=1\n"
                   "C1=1\nC2=1\nC3=1\nn = 1 2\n", encoding="utf-8")
    code, out, _ = run(capsys, "spectrum", "--config", cfg)
    assert code == 0
    direct = _table(run(capsys, "spectrum", *CASE2, "--n", "1", "2")[1])
    assert _table(out) == direct
    code, out, _ = run(capsys, "spectrum", "--config", cfg, "--Q", "0.5", "--n", "1")
    assert float(_table(out)[0]["energy"]) == 7.875


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("Q 1\n", encoding="utf-8")
    assert run(capsys, "spectrum", "--config", cfg)[0] == 1
    assert run(capsys, "spectrum", "--config", tmp_path / "absent.cfg")[0] == 1


def test_sweep_determinism(tmp_path, capsys):
    outputs = []
    for tag in "ab":
        c, s = tmp_path / f"{tag}.csv", tmp_path / f"{tag}.svg"
        assert run(capsys, "sweep", *CASE2, "--param", "Q", "--from", "0.5", "--to", "3", "--verify",
                   "--csv", c, "--plot", s)[0] == 0
        outputs.append((c.read_bytes(), s.read_bytes()))
    assert outputs[0] == outputs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdisloc", "spectrum", "--l", "1", "--n", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "# case 1"

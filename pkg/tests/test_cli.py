import io
import json
import subprocess
import sys

import pytest

from beatty_zeta.cli import parse_r, parse_s, run
from beatty_zeta.diophantine import golden


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_zsharp_at_zero_example():
    code, out, _ = call("zsharp", "--alpha", "golden", "--r", "0", "--q", "0.5", "--s", "0", "--json")
    assert code == 0
    data = json.loads(out)["z_sharp"]
    assert data["value"]["re"] == pytest.approx(-1, abs=1e-10)
    assert set(data) >= {"value", "err_est", "method"}


def test_residue_example_off_lattice():
    code, out, _ = call("residue", "--alpha", "golden", "--r", "0.3333333333", "--q", "0.5", "--json")
    assert code == 0
    rep = json.loads(out)["residue"]
    assert abs(complex(rep["measured_zsharp"]["re"], rep["measured_zsharp"]["im"])) <= 1e-4


def test_verify_quick_table():
    code, out, _ = call("verify", "--suite", "quick")
    assert code == 0
    lines = out.strip().splitlines()
    assert all(l.startswith("PASS") for l in lines[:-1])
    assert lines[-1].endswith("passed")


def test_json_wraps_every_number():
    _, out, _ = call("fourier", "--k", "1", "--n", "5", "--K", "64", "--json")
    data = json.loads(out)
    for key in ("coefficient", "truncated_indicator", "indicator"):
        assert set(data[key]) == {"value", "err_est", "method"}
        assert set(data[key]["value"]) == {"re", "im"}


@pytest.mark.parametrize("argv", [
    ("cf", "--alpha", "sqrt2", "--depth", "5"),
    ("type",),
    ("beatty", "--M", "8"),
    ("indicator", "--n", "-4"),
    ("pulse", "--t", "0.3"),
    ("discrepancy", "--M", "5"),
    ("nearhits", "--r", "0.5", "--K", "2", "--T", "0.2"),
    ("theta", "--v", "0.3", "--w", "0.7", "--u", "0.5"),
    ("psi", "--r", "0", "--q", "0.5", "--u", "1"),
    ("phi", "--r", "gamma", "--u", "1", "--repr", "both"),
    ("riemann", "--s", "2"),
    ("hurwitz", "--q", "0.5", "--s", "2"),
    ("lerch", "--r", "0.5", "--q", "0.5", "--s", "2"),
    ("zetasharp", "--r", "0.3", "--s", "0.5,1"),
    ("zdirect", "--r", "gamma", "--s", "3", "--tol", "1e-8"),
])
@pytest.mark.parametrize("fmt", ["text", "json", "csv"])
def test_subcommands_run_deterministically(argv, fmt):
    a = call(*argv, "--output", fmt)
    b = call(*argv, "--output", fmt)
    assert a[0] == 0, a[2]
    assert a[1] == b[1] and a[1]
    if fmt == "json":
        json.loads(a[1])


def test_text_outputs():
    assert call("beatty", "--M", "8")[1] == "terms: 1 3 4 6 8 9 11 12\n"
    assert "cf: 1 2 2 2 2 2" in call("cf", "--alpha", "sqrt2", "--depth", "5")[1]
    assert call("indicator", "--n", "-4")[1].splitlines()[1].startswith("indicator: 1 ")


def test_scan_csv_identical_across_threads():
    argv = ("scan", "--r", "gamma", "--re", "0.5:1.5:3", "--im", "0,1", "--output", "csv")
    one = call(*argv, "--threads", "1")
    four = call(*argv, "--threads", "4")
    assert one[0] == four[0] == 0
    assert one[1] == four[1]
    lines = one[1].splitlines()
    assert lines[0] == "s_re,s_im,val_re,val_im,err_est,pole_re,pole_im,region"
    assert len(lines) == 7 and "error:PoleError" in lines[3]


def test_threads_env_override(monkeypatch):
    monkeypatch.setenv("BEATTY_ZETA_THREADS", "3")
    code, out, _ = call("scan", "--r", "gamma", "--re", "1.5", "--im", "0", "--output", "csv")
    assert code == 0
    monkeypatch.setenv("BEATTY_ZETA_THREADS", "zero")
    assert call("scan", "--re", "1.5")[0] == 1


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nalpha = sqrt2\ns = 2\nq=0.25\nquad_tol = 1e-11\n")
    code, out, _ = call("hurwitz", "--config", str(cfg), "--json")
    assert code == 0
    v = json.loads(out)["hurwitz"]["value"]["re"]
    code, out2, _ = call("hurwitz", "--config", str(cfg), "--q", "0.5", "--json")
    v2 = json.loads(out2)["hurwitz"]["value"]["re"]
    assert v2 == pytest.approx(4.934802200544679, abs=1e-12) and v != v2
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    assert call("riemann", "--config", str(bad), "--s", "2")[0] == 1
    assert call("riemann", "--config", str(tmp_path / "missing.cfg"), "--s", "2")[0] == 1


def test_set_overrides():
    assert call("zsharp", "--r", "gamma", "--s", "2", "--set", "quad_tol=1e-10", "--method", "continued")[0] == 0
    assert call("zsharp", "--s", "2", "--set", "bogus=1")[0] == 1
    assert call("zsharp", "--s", "2", "--set", "u_min=0.5")[0] == 3


@pytest.mark.parametrize("argv,code", [
    (("bogus",), 1),
    (("zsharp",), 1),
    (("zsharp", "--s", "a,b"), 1),
    (("zsharp", "--alpha", "pi", "--s", "2"), 1),
    (("zsharp", "--alpha", "quad:1,1,5,-2", "--s", "2"), 3),
    (("zsharp", "--q", "1.5", "--s", "2"), 3),
    (("riemann", "--s", "1"), 3),
    (("zsharp", "--r", "0.3", "--s", "0.01"), 3),
    (("zdirect", "--s", "0.5"), 3),
    (("cf", "--alpha", "dec:3.14", "--depth", "20"), 4),
    (("zsharp", "--r", "0.25", "--s", "2", "--set", "lattice_tol=1e-3", "--set", "K_max=100000"), 4),
    (("theta", "--u", "-1"), 3),
])
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_parse_helpers():
    assert parse_s("1.5") == 1.5
    assert parse_s("2,-3") == 2 - 3j
    r, hit = parse_r("3*gamma-2", golden())
    assert hit == (3, -2) and r == pytest.approx(3 * golden().gamma.value - 2)
    assert parse_r("-gamma", golden())[1] == (-1, 0)
    assert parse_r("0.25", golden()) == (0.25, None)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "beatty_zeta", "beatty", "--M", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "terms: 1 3 4 6 8\n"
    proc = subprocess.run([sys.executable, "-m", "beatty_zeta", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "zsharp" in proc.stdout

import io
import math
import re
import subprocess
import sys

import numpy as np
import pytest

from jwlattice import anyons
from jwlattice.cli import run_cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def read_matrix(text):
    rows = [line for line in text.splitlines() if line.startswith("[")]
    return np.array([[complex(float(a), float(b)) for a, b in re.findall(r"\[(\S+), (\S+)\]", r)] for r in rows])


def test_smatrix_ising():
    code, out, _ = run("smatrix", "--model", "ising")
    assert code == 0
    assert out.splitlines()[:6] == ["model ising", "n 2", "m 2", "basis 1 sigma psi", "rows 3", "cols 3"]
    np.testing.assert_allclose(read_matrix(out), anyons.s_matrix(anyons.load_model("ising")), atol=1e-12)


def test_sft_z3_moduli():
    code, out, _ = run("sft", "--model", "z3", "--n", "2", "--m", "2")
    assert code == 0
    np.testing.assert_allclose(np.abs(read_matrix(out)), 1 / math.sqrt(3), atol=1e-8)


def test_export_ll_first_entry():
    code, out, _ = run("export-ll", "--model", "fibonacci")
    assert code == 0
    assert out.splitlines()[6].startswith("[5.257311121191e-01, 0.000000000000e+00] [-6.881909602356e-01, -5.000000000000e-01]")


def test_conf_dims():
    code, out, _ = run("conf", "--dims", "--model", "fibonacci", "--n", "3", "--m", "2")
    assert code == 0
    assert "conf_dimension 5" in out.splitlines()
    assert "basis" not in out


def test_conf_lists_basis():
    code, out, _ = run("conf", "--model", "z3")
    assert code == 0
    assert out.splitlines()[-3:] == ["0,0/0,0:0.0|0.0|0.0|0.0", "1,2/2,1:1.0|2.0|1.0|2.0", "2,1/1,2:2.0|1.0|2.0|1.0"]


def test_validate():
    code, out, _ = run("validate", "--model", "semion")
    assert code == 0 and "valid=true" in out and "modular=true" in out
    code, out, _ = run("validate", "--model", "symmetric-z2")
    assert code == 0 and "modular=false" in out


def test_model_file(tmp_path):
    path = tmp_path / "fib.json"
    path.write_text(anyons.model_to_text(anyons.load_model("fibonacci")))
    code, out, _ = run("smatrix", "--model-file", str(path))
    assert code == 0
    np.testing.assert_allclose(read_matrix(out), anyons.s_matrix(anyons.load_model("fibonacci")), atol=1e-12)


def test_usage_errors(tmp_path):
    assert run("verify", "--model", "nosuchmodel")[0] == 2
    assert "nosuchmodel" in run("verify", "--model", "nosuchmodel")[2]
    assert run("verify", "--suite", "killing,bogus")[0] == 2
    assert run("verify", "--n", "-1")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2
    assert run("smatrix", "--model-file", str(tmp_path / "absent.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("smatrix", "--model-file", str(bad))[0] == 2


def test_verify_suite_and_out(tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run("verify", "--model", "fibonacci", "--suite", "killing,gamma.dim", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert [line.split()[0] for line in lines[:2]] == ["check=killing", "check=gamma.dim"]
    assert lines[-1] == "summary checks=2 passed=2 failed=0"


def test_verify_failure_status():
    code, out, _ = run("verify", "--suite", "killing", "--tol", "0")
    assert code == 1 and "pass=false" in out


def test_verify_all_lists_registry():
    code, out, _ = run("verify", "--model", "fibonacci", "--n", "2", "--m", "2", "--suite", "all")
    assert code == 0
    assert out.count("check=") == 24
    assert out.endswith("summary checks=24 passed=24 failed=0\n")


def test_threads_do_not_change_output():
    a = run("verify", "--model", "z3", "--suite", "all")
    b = run("verify", "--model", "z3", "--suite", "all", "--threads", "4")
    assert a == b


def test_list_checks():
    code, out, _ = run("verify", "--list-checks")
    assert code == 0 and len(out.splitlines()) == 24
    assert run("--list-checks")[1] == out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jwlattice.cli", "smatrix", "--model", "semion"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("model semion\n")

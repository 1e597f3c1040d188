import json
import subprocess
import sys

import pytest

from cmforge import cache as cachemod
from cmforge.classpoly import class_polynomial
from cmforge.errors import CacheError
from cmforge.polynomials import IntPolynomial
from cmforge.transform import modular_polynomial_J


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "cmforge.cli", *args],
        capture_output=True, text=True,
    )
    return proc


# --- cache ---------------------------------------------------------------

def test_cache_roundtrip_classpoly(tmp_path):
    poly = class_polynomial(-23).poly
    entry = cachemod.CacheEntry("classpoly", {"D": -23}, poly)
    path = cachemod.write_entry(tmp_path, entry)
    back = cachemod.read_entry(path)
    assert back.payload == poly
    assert back.params["D"] == "-23"
    assert back.params["version"] == cachemod.TOOL_VERSION


def test_cache_file_format_for_H4(tmp_path):
    poly = class_polynomial(-4).poly
    path = cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, poly)
    )
    lines = path.read_text().splitlines()
    assert lines[0] == "CMFORGE v1 classpoly"
    assert lines[2:] == ["-1728", "1", "END"]


def test_cache_roundtrip_bivariate(tmp_path):
    poly = modular_polynomial_J(2)
    path = cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("Jpoly", {"s": 2}, poly)
    )
    back = cachemod.read_entry(path)
    assert back.payload == poly


def test_cache_missing_end(tmp_path):
    poly = class_polynomial(-4).poly
    path = cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, poly)
    )
    truncated = "\n".join(path.read_text().splitlines()[:-1])
    path.write_text(truncated)
    with pytest.raises(CacheError):
        cachemod.read_entry(path)


def test_cache_version_mismatch_refused(tmp_path):
    poly = class_polynomial(-4).poly
    path = cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, poly)
    )
    text = path.read_text().replace(f"version={cachemod.TOOL_VERSION}", "version=0.0.9")
    path.write_text(text)
    with pytest.raises(CacheError):
        cachemod.write_entry(tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, poly))
    # force overwrites
    cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, poly), force=True
    )


def test_cache_validates_degree(tmp_path):
    bogus = IntPolynomial([1, 2, 1])  # degree 2 but h(-4) = 1
    path = cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, bogus), force=True
    )
    with pytest.raises(CacheError):
        cachemod.read_entry(path)


def test_cache_lock_released(tmp_path):
    poly = class_polynomial(-4).poly
    cachemod.write_entry(tmp_path, cachemod.CacheEntry("classpoly", {"D": -4}, poly))
    assert not (tmp_path / ".cmforge.lock").exists()


def test_cache_divpoly_rationals(tmp_path):
    from fractions import Fraction

    from cmforge.division import division_polynomial
    from cmforge.modforms import CMPoint
    from cmforge.quadratic import principal_form

    pt = CMPoint.from_form(principal_form(-4), 200)
    t2 = division_polynomial(2, pt, 192)
    coeffs = list(t2.coefficients)
    path = cachemod.write_entry(
        tmp_path, cachemod.CacheEntry("divpoly", {"D": -4, "N": 2}, coeffs)
    )
    back = cachemod.read_entry(path)
    restored = (
        [Fraction(c) for c in back.payload.coeffs]
        if hasattr(back.payload, "coeffs")
        else list(back.payload)
    )
    assert restored == coeffs


# --- CLI -----------------------------------------------------------------

def test_cli_classpoly_plain():
    proc = run_cli("classpoly", "-D", "-4")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "X - 1728"


def test_cli_classpoly_json():
    proc = run_cli("classpoly", "-D", "-3", "--json")
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"D": -3, "coeffs": [0, 1]}


def test_cli_classpoly_invalid_discriminant():
    proc = run_cli("classpoly", "-D", "-5")
    assert proc.returncode == 2


def test_cli_modpoly_level_1():
    proc = run_cli("modpoly", "-s", "1")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "X - Y"


def test_cli_modpoly_phi_constant():
    proc = run_cli("modpoly", "-s", "2", "--phi", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    terms = {(i, j): c for i, j, c in data["terms"]}
    assert terms[(0, 0)] == 4096


def test_cli_modpoly_level_cap():
    proc = run_cli("modpoly", "-s", "9")
    assert proc.returncode == 2


def test_cli_verify_kronecker():
    proc = run_cli("verify", "kronecker", "-p", "2", "--json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["suite"] == "kronecker" and report["pass"] is True
    assert set(report) >= {"suite", "params", "pass", "residual", "seconds"}


def test_cli_verify_single_frobenius():
    proc = run_cli("verify", "frobenius", "-D", "-23", "-p", "2")
    assert proc.returncode == 0
    assert proc.stdout.startswith("PASS")


def test_cli_verify_genus_range():
    proc = run_cli("verify", "genus", "--dmax", "40", "--json")
    assert proc.returncode == 0
    lines = [json.loads(ln) for ln in proc.stdout.splitlines()]
    assert all(ln["pass"] for ln in lines)
    assert len(lines) == len([D for D in range(-3, -41, -1) if D % 4 in (0, 1)])


def test_cli_cache_dir_roundtrip(tmp_path):
    first = run_cli("classpoly", "-D", "-23", "--cache-dir", str(tmp_path))
    assert first.returncode == 0
    assert (tmp_path / "classpoly_D-23.txt").exists()
    second = run_cli("classpoly", "-D", "-23", "--cache-dir", str(tmp_path))
    assert second.stdout == first.stdout


def test_cli_env_cache(tmp_path, monkeypatch):
    import os

    env = dict(os.environ)
    env["CMFORGE_CACHE"] = str(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "cmforge.cli", "modpoly", "-s", "2"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0
    assert (tmp_path / "Jpoly_s2.txt").exists()

"""Command-line surface: exit codes, JSON output, environment knobs."""

import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "polykernel.cli"]


def run(*args, env_fuel=None):
    import os

    env = dict(os.environ)
    env.pop("POLYKERNEL_FUEL", None)
    if env_fuel is not None:
        env["POLYKERNEL_FUEL"] = str(env_fuel)
    return subprocess.run(CLI + list(args), capture_output=True, text=True, env=env)


def test_usage_error_is_exit_3():
    assert run("frobnicate").returncode == 3
    assert run("nf").returncode == 3  # --term is required


def test_check_declaration_files(tmp_path):
    good = tmp_path / "good.lp2"
    good.write_text(
        "bool : * := \u03a0\u03b1:*. \u03b1 -> \u03b1 -> \u03b1\n"
        "true : bool := \u03bb\u03b1:*. \u03bbx,y:\u03b1. x\n"
    )
    r = run("check", str(good))
    assert r.returncode == 0

    bad = tmp_path / "bad.lp2"
    bad.write_text("oops : * := \u03bbx:*. x\n")
    r = run("check", str(bad))
    assert r.returncode == 1
    assert "error" in r.stdout


def test_nf_prints_erasure_normal_form():
    r = run("nf", "--term", "s1", "--weca", "betaeta")
    assert r.returncode == 0
    out = r.stdout.strip()
    assert out.startswith("λ") and "k" in out


def test_eq_exit_codes():
    assert run("eq", "id bool true", "true").returncode == 0
    assert run("eq", "true", "false").returncode == 1


def test_eq_unknown_with_tiny_fuel():
    r = run("eq", "church3 nat O succ", "O", env_fuel=10)
    assert r.returncode == 2


def test_model_eval():
    assert run("model-eval", "bot", "--model", "pi").returncode == 0
    r = run("--json", "model-eval", "bot", "--model", "pi")
    blob = json.loads(r.stdout)
    assert blob["verdict"] in ("Empty", "Inhabited")
    # generated model defers on family quantification
    assert run("model-eval", "ind_nat", "--model", "generated").returncode == 2


def test_suite_default_manifest_json():
    r = run("--json", "suite")
    assert r.returncode == 0
    reports = json.loads(r.stdout)
    assert {b["id"] for b in reports} >= {"thm-4.2", "thm-4.3", "lem-5.9"}
    assert all(b["status"] == "Reproduced" for b in reports)
    assert all(set(b) == {"id", "status", "obligations", "flags", "millis"}
               for b in reports)


def test_suite_rejects_bad_manifest(tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"checks": ["no-such-check"]}))
    assert run("suite", str(bad)).returncode == 1


def test_refute_certificate():
    import importlib.resources

    cert = str(importlib.resources.files("polykernel") / "certs" / "no_induction.json")
    assert run("refute", cert).returncode == 0
    assert run("refute", cert, "--witness", "EmptySet").returncode == 1
    assert run("refute", "/nonexistent.json").returncode == 3


def test_enumerate_small_bound():
    r = run("--json", "enumerate", "bool", "--bound", "5")
    assert r.returncode == 0
    blob = json.loads(r.stdout)
    assert "refl" in blob["members"]


@pytest.mark.parametrize("flag", ["--fuel", None])
def test_fuel_sources_agree(flag):
    # the flag and the environment variable set the same budget
    if flag:
        r = run("--fuel", "10", "eq", "church3 nat O succ", "O")
    else:
        r = run("eq", "church3 nat O succ", "O", env_fuel=10)
    assert r.returncode == 2

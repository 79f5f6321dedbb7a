import json
import os
import subprocess
import sys

import numpy as np

from momt import generate_instance, instance_to_json
from momt.serialize import InstanceFile
from momt.words import empty_word, generator
from momt import MomentMap, full_truncation


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "momt.cli", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


def write_scalar_instance(path, t):
    sigma = full_truncation(1, 1)
    inst = InstanceFile(
        n=1, dim_out=1, dim_in=1, sigma=sigma,
        moments={
            empty_word(1): np.eye(1, dtype=complex),
            generator(1, 1): np.array([[t]], dtype=complex),
        },
        kind="manual", seed=0,
    )
    path.write_text(instance_to_json(inst))


def test_check_feasible_scalar(tmp_path):
    inst = tmp_path / "t05.json"
    write_scalar_instance(inst, 0.5)
    out = tmp_path / "rep.json"
    res = run_cli("check", "--problem", "poisson", "-i", str(inst), "-o", str(out))
    assert res.returncode == 0, res.stderr
    rep = json.loads(out.read_text())
    assert rep["pass"] is True
    assert rep["min_eigenvalue"] == 0
    assert rep["index_order"] == ["|", "|1", "1|"]


def test_check_infeasible_scalar_still_writes_report(tmp_path):
    inst = tmp_path / "t2.json"
    write_scalar_instance(inst, 2.0)
    out = tmp_path / "rep.json"
    res = run_cli("check", "--problem", "poisson", "-i", str(inst), "-o", str(out))
    assert res.returncode == 1
    rep = json.loads(out.read_text())
    assert rep["pass"] is False
    assert abs(rep["min_eigenvalue"] + 3.0) < 1e-12


def test_gen_synthesize_verify_chain(tmp_path):
    inst = tmp_path / "inst.json"
    cert = tmp_path / "cert.json"
    res = run_cli("gen", "--kind", "row-contraction", "--n", "2", "--dim", "2",
                  "--depth", "2", "--seed", "7", "-o", str(inst))
    assert res.returncode == 0, res.stderr
    res = run_cli("synthesize", "--problem", "poisson", "-i", str(inst), "-o", str(cert))
    assert res.returncode == 0, res.stderr
    assert "certificate" in res.stdout
    res = run_cli("verify", "--problem", "poisson", "-i", str(inst), "-c", str(cert))
    assert res.returncode == 0, res.stderr


def test_certificates_are_byte_identical(tmp_path):
    inst = tmp_path / "inst.json"
    run_cli("gen", "--kind", "row-contraction", "--n", "2", "--dim", "2",
            "--depth", "2", "--seed", "21", "-o", str(inst))
    c1 = tmp_path / "c1.json"
    c2 = tmp_path / "c2.json"
    run_cli("synthesize", "--problem", "poisson", "-i", str(inst), "-o", str(c1))
    run_cli("synthesize", "--problem", "poisson", "-i", str(inst), "-o", str(c2))
    assert c1.read_bytes() == c2.read_bytes()


def test_gen_is_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for p in (a, b):
        run_cli("gen", "--kind", "commuting", "--n", "2", "--dim", "2",
                "--depth", "2", "--seed", "3", "-o", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_synthesize_negative_writes_reports(tmp_path):
    inst = tmp_path / "free.json"
    run_cli("gen", "--problem", "quotient-poisson", "--kind", "isometric-truncated",
            "--n", "2", "--dim", "2", "--depth", "2", "--seed", "3", "-o", str(inst))
    out = tmp_path / "rep.json"
    res = run_cli("synthesize", "--problem", "quotient-poisson",
                  "-i", str(inst), "-o", str(out))
    assert res.returncode == 1
    obj = json.loads(out.read_text())
    assert obj["pass"] is False
    assert [r["kind"] for r in obj["reports"]] == ["relations", "dominance"]


def test_trig_problem_over_cli(tmp_path):
    inst = tmp_path / "comm.json"
    cert = tmp_path / "cert.json"
    run_cli("gen", "--kind", "commuting", "--n", "2", "--dim", "2",
            "--depth", "2", "--seed", "11", "-o", str(inst))
    res = run_cli("check", "--problem", "trig", "-i", str(inst))
    assert res.returncode == 0, res.stderr
    res = run_cli("synthesize", "--problem", "trig", "-i", str(inst), "-o", str(cert))
    assert res.returncode == 0, res.stderr
    res = run_cli("verify", "--problem", "trig", "-i", str(inst), "-c", str(cert))
    assert res.returncode == 0, res.stderr
    assert "byte comparison" in res.stdout


def test_usage_errors_exit_two(tmp_path):
    inst = tmp_path / "t05.json"
    write_scalar_instance(inst, 0.5)
    # wrong problem name -> argparse error
    res = run_cli("check", "--problem", "bogus", "-i", str(inst))
    assert res.returncode == 2
    # missing pi/gamma payload for the commutative problem
    res = run_cli("check", "--problem", "commutative", "-i", str(inst))
    assert res.returncode == 2
    assert "pi/gamma" in res.stderr
    # unreadable input
    res = run_cli("check", "--problem", "poisson", "-i", str(tmp_path / "absent.json"))
    assert res.returncode == 2
    # broken MOMT_TOL
    res = run_cli("check", "--problem", "poisson", "-i", str(inst),
                  env={"MOMT_TOL": "bogus"})
    assert res.returncode == 2


def test_tol_flag_and_env(tmp_path):
    inst = tmp_path / "t05.json"
    write_scalar_instance(inst, 0.5)
    res = run_cli("check", "--problem", "poisson", "-i", str(inst),
                  env={"MOMT_TOL": "0.01"})
    assert res.returncode == 0
    assert "tol 0.01" in res.stdout
    # explicit flag beats the environment
    res = run_cli("check", "--problem", "poisson", "-i", str(inst),
                  "--tol", "1e-5", env={"MOMT_TOL": "0.01"})
    assert "tol 1e-05" in res.stdout


def test_jobs_over_multiple_inputs(tmp_path):
    good = tmp_path / "good.json"
    bad = tmp_path / "bad.json"
    write_scalar_instance(good, 0.5)
    write_scalar_instance(bad, 2.0)
    outdir = tmp_path / "reports"
    res = run_cli("check", "--problem", "poisson",
                  "-i", str(good), "-i", str(bad),
                  "-o", str(outdir), "--jobs", "2")
    assert res.returncode == 1  # worst per-file code
    assert (outdir / "good.report.json").exists()
    assert (outdir / "bad.report.json").exists()
    assert json.loads((outdir / "good.report.json").read_text())["pass"] is True
    assert json.loads((outdir / "bad.report.json").read_text())["pass"] is False


def test_lambda_flag_merges(tmp_path):
    inst = tmp_path / "lam.json"
    run_cli("gen", "--kind", "lambda-commuting", "--n", "2", "--dim", "2",
            "--depth", "2", "--seed", "9", "-o", str(inst))
    # overriding with the instance's own lambda is a no-op; a malformed
    # entry is a usage error
    res = run_cli("check", "--problem", "commutative", "-i", str(inst),
                  "--lambda", "2.1=not,numbers")
    assert res.returncode == 2
    res = run_cli("check", "--problem", "commutative", "-i", str(inst))
    assert res.returncode == 0, res.stderr

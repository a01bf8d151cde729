import csv
import io
import json
import os
import subprocess
import sys

import pytest

from heckecov.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_s3_s2(capsys):
    code, out, _ = run(capsys, "enumerate", "s3-s2")
    doc = json.loads(out)
    assert code == 0 and doc["exhaustive"]
    assert len(doc["cosets"]) == 3
    assert [d["R"] for d in doc["double_cosets"]] == [1, 2]


def test_enumerate_z4_normal(capsys):
    code, out, _ = run(capsys, "enumerate", "--instance", "z4-normal")
    doc = json.loads(out)
    assert len(doc["cosets"]) == 2 and all(c["R"] == 1 for c in doc["cosets"])


def test_enumerate_bc_window_matches_oracle(capsys):
    import oracles
    code, out, _ = run(capsys, "enumerate", "bc-one-prime", "--p", "2", "--window", "2")
    doc = json.loads(out)
    assert code == 0 and not doc["exhaustive"]
    assert len(doc["cosets"]) == len(oracles.bc_window_cosets(2, 2, 2))
    assert doc["params"]["window"] == 2


def test_structure_s3_s2(capsys):
    code, out, _ = run(capsys, "structure", "s3-s2")
    doc = json.loads(out)
    e, t = doc["basis"]
    assert e == "e"
    rows = {(x, y, z): c for x, y, z, c in doc["rows"]}
    assert rows[(t, t, e)] == 2 and rows[(t, t, t)] == 1
    code, out, _ = run(capsys, "structure", "s3-s2", "--format", "csv")
    table = list(csv.reader(io.StringIO(out)))
    assert table[0] == ["x", "y", "z", "coefficient"] and len(table) == 6


def test_structure_bc_is_informative(capsys):
    code, out, _ = run(capsys, "structure", "bc-one-prime", "--p", "3")
    doc = json.loads(out)
    assert code == 0 and len(doc["basis"]) > 1
    assert any(c > 1 for *_, c in doc["rows"])


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "s3-s2", "all")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "verify", "bc-one-prime", "s2-exel", "--p", "2")
    doc = json.loads(out)
    assert code == 0
    names = {c["name"] for s in doc["suites"] for c in s["checks"]}
    assert {"exel[(0,2)]", "exel[(0,4)]"} <= names
    code, out, _ = run(capsys, "verify", "s3-s2", "s1-covariance", "--inject-fault", "character-v")
    doc = json.loads(out)
    assert code == 1 and doc["failed"] > 0
    assert any("witness" in c for s in doc["suites"] for c in s["checks"])


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "z4-normal", "--suite", "s1-covariance", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["suite", "check", "passed", "probes", "witness"]
    assert all(r[2] == "True" for r in rows[1:])


def test_usage_errors(capsys):
    assert run(capsys, "verify", "s3-s2", "s2-exel")[0] == 2
    assert run(capsys, "verify", "s3-s2", "bogus")[0] == 2
    assert run(capsys, "export", "bc-one-prime")[0] == 2
    assert run(capsys, "enumerate", "nope")[0] == 2
    assert run(capsys, "enumerate", "s3-s2", "--param", "p=2")[0] == 2
    assert run(capsys, "enumerate", "bc-one-prime", "--param", "p")[0] == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_export_s3_s2(capsys, tmp_path):
    target = tmp_path / "s3.json"
    code, _, _ = run(capsys, "export", "s3-s2", "--out", str(target))
    doc = json.loads(target.read_text())
    assert code == 0 and len(doc["basis"]) == 3
    rho = next(m for m in doc["matrices"] if m["op"] == "rho" and m["label"] != "e")
    assert rho["rows"] == [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]]
    assert sum(m["op"] == "lambda" for m in doc["matrices"]) == 6
    assert doc["graded_algebra"]["name"] == "C[S3]"


def test_instances_listing(capsys):
    code, out, _ = run(capsys, "instances")
    names = [e["name"] for e in json.loads(out)["instances"]]
    assert code == 0 and "bc-one-prime" in names and "s3-s2" in names


def _subprocess_verify(instance, hashseed):
    env = {**os.environ, "PYTHONHASHSEED": str(hashseed)}
    return subprocess.run([sys.executable, "-m", "heckecov", "verify", instance, "all", "--seed", "42"],
                          capture_output=True, env=env, check=False).stdout


@pytest.mark.parametrize("instance", ["s3-s2", "bc-one-prime"])
def test_reports_are_byte_identical(instance):
    a = _subprocess_verify(instance, 1)
    b = _subprocess_verify(instance, 9001)
    assert a and a == b

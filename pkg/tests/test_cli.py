import io
import json
import subprocess
import sys

import pytest

from partition_vc import bundle_family, covering_family
from partition_vc.harness import cli, suites
from partition_vc.harness.records import ResultRecord, derive_seed, dumps


def run(args):
    out = io.StringIO()
    code = cli.main(args, out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return write


def test_vc_command(files):
    code, out = run(["vc", files("f.json", covering_family(3).to_json())])
    assert code == 0
    assert json.loads(out) == {"dimension": 3, "witness_set": [0, 1, 2]}


def test_alpha_command(files):
    path = files("f.json", bundle_family(2).to_json())
    code, out = run(["alpha", path])
    assert code == 0
    obj = json.loads(out)
    assert obj["alpha"] == {"num": 1, "den": 2} and obj["mode"] == "exact"
    code, out = run(["alpha", path, "--mode", "sampled", "--seed", "3", "--samples", "50"])
    assert code == 0 and json.loads(out)["samples"] == 50
    assert run(["alpha", path, "--mode", "sampled"])[0] == 2


def test_mechanism_command(files):
    inst = {
        "m": 2,
        "v1": {"kind": "capped_additive", "per_item": [2, 2], "cap": 3},
        "v2": {"kind": "capped_additive", "per_item": [1, 1], "cap": 2},
    }
    path = files("i.json", inst)
    code, out = run(["mechanism", path, "--bundle"])
    obj = json.loads(out)
    assert code == 0
    assert obj["allocation"] == {"side1": [0, 1], "side2": []}
    assert (obj["payment1"], obj["payment2"], obj["opt_welfare"]) == (2, 0, 3)
    code, out = run(["mechanism", path, "--full-covering"])
    assert json.loads(out)["welfare"] == 3
    rpath = files("r.json", bundle_family(2).to_json())
    assert json.loads(run(["mechanism", path, "--range", rpath])[1])["welfare"] == 3
    assert run(["mechanism", path])[0] == 2


@pytest.mark.parametrize(
    "content",
    ["{not json", json.dumps({"m": 2}), json.dumps({"m": 2, "entries": [{"side1": [0], "side2": [0]}]})],
)
def test_malformed_input_exits_2(files, content):
    assert run(["vc", files("bad.json", content)])[0] == 2


def test_empty_range_exits_2(files):
    inst = {"m": 1, "v1": {"kind": "additive", "per_item": [1]}, "v2": {"kind": "additive", "per_item": [1]}}
    code, _ = run(["mechanism", files("i.json", inst), "--range", files("r.json", {"m": 1, "entries": []})])
    assert code == 2


def test_missing_file_exits_2(tmp_path):
    assert run(["vc", str(tmp_path / "nope.json")])[0] == 2


def test_unknown_suite_exits_2():
    assert run(["verify-lemmas", "no-such-suite"])[0] == 2


def test_bad_arguments_exit_2():
    assert run(["frobnicate"])[0] == 2
    assert run(["sweep", "ratio", "--m", "x"])[0] == 2


def test_budget_exits_3(files, monkeypatch):
    path = files("f.json", bundle_family(6).to_json())
    assert run(["--max-pow3-m", "5", "alpha", path])[0] == 3
    monkeypatch.setenv("PARTITION_VC_MAX_POW3_M", "5")
    assert run(["alpha", path])[0] == 3
    assert run(["--max-pow3-m", "6", "alpha", path])[0] == 0
    monkeypatch.setenv("PARTITION_VC_MAX_SUBSET_SIZE", "4")
    assert run(["vc", path])[0] == 3


def test_verify_single_suite():
    code, out = run(["verify-lemmas", "truthfulness", "--seed", "1"])
    assert code == 0
    (rec,) = json.loads(out)
    assert rec["experiment"] == "truthfulness" and rec["passed"] is True
    assert "wall_time" not in rec


def test_verify_is_reproducible():
    a = run(["verify-lemmas", "reduction", "--seed", "5", "--trials", "20"])
    b = run(["verify-lemmas", "reduction", "--seed", "5", "--trials", "20"])
    assert a == b and a[0] == 0


def test_verify_failure_writes_witness(tmp_path, monkeypatch):
    def broken(seed, budget):
        rec = ResultRecord("broken", "always fails", {"seed": seed})
        rec.fail({"why": "on purpose"})
        return rec

    monkeypatch.setitem(suites.SUITES, "broken", broken)
    code, out = run(["verify-lemmas", "broken", "--witness-dir", str(tmp_path)])
    assert code == 1
    witness = json.loads((tmp_path / "broken-failure.json").read_text())
    assert witness["witness"] == {"why": "on purpose"} and witness["passed"] is False


def test_config_file(files):
    cfg = files("cfg.json", {"seed": 3, "trials": 10})
    a = run(["--config", cfg, "verify-lemmas", "split-inequality"])
    b = run(["verify-lemmas", "split-inequality", "--seed", "3", "--trials", "10"])
    assert a == b
    assert json.loads(a[1])[0]["parameters"]["trials"] == 10
    bad = files("bad.json", {"colour": "red"})
    assert run(["--config", bad, "verify-lemmas", "split-inequality"])[0] == 2


def test_sweep_byte_identical(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["sweep", "alpha-vs-vc", "--m", "3,4", "--seed", "9", "--count", "5", "--out", str(p1)])[0] == 0
    assert run(["sweep", "alpha-vs-vc", "--m", "3,4", "--seed", "9", "--count", "5", "--out", str(p2)])[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert lines[0] == "m,family_id,size,covering,alpha_num,alpha_den,alpha_mode,vc"
    assert len(lines) == 11
    other = run(["sweep", "alpha-vs-vc", "--m", "3,4", "--seed", "10", "--count", "5"])[1]
    assert other != p1.read_text()


def test_sweep_kinds():
    code, out = run(["sweep", "ratio", "--m", "3", "--count", "1"])
    assert code == 0 and out.splitlines()[1].startswith("3,bundle,1,2,")
    code, out = run(["sweep", "code-growth", "--m", "8-9", "--seeds", "1", "--attempts", "200"])
    assert code == 0 and len(out.splitlines()) == 3
    code, out = run(["sweep", "covering-size", "--m", "4", "--eps", "1/10"])
    assert code == 0 and out.splitlines()[1].startswith("4,1,10,")


def test_derive_seed_is_stable():
    assert derive_seed(0, "x") == derive_seed(0, "x")
    assert derive_seed(0, "x") != derive_seed(1, "x")
    assert 0 <= derive_seed(7, "reduction") < 2**64


def test_dumps_fractions():
    from fractions import Fraction

    assert json.loads(dumps({"a": Fraction(2, 4)})) == {"a": {"num": 1, "den": 2}}


def test_module_entry_point(files):
    path = files("f.json", covering_family(2).to_json())
    proc = subprocess.run([sys.executable, "-m", "partition_vc", "vc", path], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dimension"] == 2

import json
import subprocess
import sys

import pytest

from acyclic_matching.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_witness_qr(capsys, tmp_path):
    out = tmp_path / "qr.json"
    code, _, _ = run(capsys, "witness", "qr", "--p", "11", "--out", str(out))
    assert code == 0
    d = json.loads(out.read_text())
    assert d["generator"]["a"] == 1 and d["generator"]["b"] == 5
    assert run(capsys, "check", str(out))[0] == 0


def test_witness_qr_p5_unavailable(capsys):
    code, out, err = run(capsys, "witness", "qr", "--p", "5")
    assert code == 1 and out == "" and "construction-unavailable" in err


def test_witness_cycle_stdout(capsys):
    code, out, _ = run(capsys, "witness", "cycle", "--p", "11", "--k", "5")
    assert code == 0
    d = json.loads(out)
    assert d["kind"] == "cycle" and len(d["A"]) == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["witness", "window", "--variant", "integer", "--window", "40"],
        ["witness", "pairing", "--p", "13"],
        ["witness", "failure", "--group", "z:7", "--order", "3"],
        ["witness", "linear", "--tower", "gf:5^3", "--m", "1"],
        ["witness", "linear", "--p", "7", "--n", "3", "--m", "1"],
        ["witness", "transcendental", "--m", "1"],
    ],
)
def test_every_witness_kind_round_trips(capsys, tmp_path, argv):
    out = tmp_path / "c.json"
    assert run(capsys, *argv, "--out", str(out))[0] == 0
    assert run(capsys, "check", str(out))[0] == 0


def test_check_tampered_and_truncated(capsys, tmp_path):
    good = tmp_path / "g.json"
    run(capsys, "witness", "qr", "--p", "7", "--out", str(good))
    d = json.loads(good.read_text())
    d["f"][0][1], d["f"][1][1] = d["f"][1][1], d["f"][0][1]
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps(d))
    assert run(capsys, "check", str(bad))[0] == 1
    trunc = tmp_path / "t.json"
    trunc.write_text(good.read_text()[:40])
    assert run(capsys, "check", str(trunc))[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2


def test_search_exit_codes(capsys):
    code, out, _ = run(capsys, "search", "fails-at-order", "--group", "z:7", "--order", "4")
    assert code == 0 and json.loads(out)["kind"] == "failure"
    assert run(capsys, "search", "fails-at-order", "--group", "z:5", "--order", "3")[0] == 1
    assert run(capsys, "search", "fails-at-order", "--group", "z:997", "--order", "400", "--budget", "10")[0] == 3
    assert run(capsys, "search", "fails-at-order", "--group", "bogus", "--order", "3")[0] == 2
    assert run(capsys, "search", "fails-at-order", "--group", "int", "--order", "3")[0] == 2
    assert run(capsys, "search", "fails-at-order", "--group", "int", "--order", "3", "--window", "4")[0] == 0


def test_search_matching_property(capsys):
    code, out, _ = run(capsys, "search", "matching-property", "--group", "z:4", "--order", "2")
    assert code == 0 and "A={0, 2}" in out
    assert run(capsys, "search", "matching-property", "--group", "z:5", "--order", "5")[0] == 1


def test_search_lmp(capsys):
    assert run(capsys, "search", "lmp-counterexample", "--tower", "gf:2^4")[0] == 0
    assert run(capsys, "search", "lmp-counterexample", "--tower", "gf:2^3")[0] == 1
    assert run(capsys, "search", "lmp-counterexample", "--tower", "gf:4^2")[0] == 2


def test_verify_group_small(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "--suite", "group", "--max-p", "7", "--out", str(out))
    assert code == 0
    ids = [c["check_id"] for c in json.loads(out.read_text())["checks"]]
    for want in ("qr-witness", "cycle-witness", "involution", "unique-matching", "matching-property"):
        assert want in ids


def test_verify_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "--suite", "group", "--max-p", "99")[0] == 2
    assert run(capsys, "verify", "--suite", "linear", "--out", str(tmp_path / "no" / "such" / "dir.json"))[0] == 2


def test_verify_timings_flag(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "linear", "--timings")
    assert code == 0
    assert all("elapsed" in c for c in json.loads(out)["checks"])
    code, out, _ = run(capsys, "verify", "--suite", "linear")
    assert all("elapsed" not in c for c in json.loads(out)["checks"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "acyclic_matching", "witness", "qr", "--p", "7"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "qr"

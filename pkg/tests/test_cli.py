import io
import json

import pytest

from specurve.cli import run


def call(argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    status = run(argv, out, err)
    return status, out.getvalue(), err.getvalue()


def test_hurwitz_plain():
    assert call(["hurwitz", "--genus", "1", "--mu", "2"])[:2] == (0, "1/12\n")


def test_hurwitz_oracle_flag():
    status, out, _ = call(["hurwitz", "--genus", "0", "--mu", "2,1", "--oracle"])
    assert status == 0 and "PASS oracle" in out


def test_apery_json():
    status, out, _ = call(["apery", "--n", "5", "--json"])
    doc = json.loads(out)
    assert status == 0
    assert doc["tool"] == "spectral-forge"
    assert doc["result"]["A"] == {"num": "819005", "den": "1"}
    assert set(doc) == {"tool", "version", "command", "inputs", "result", "checks"}


def test_apery_report_json():
    status, out, _ = call(["apery", "--n", "12", "--report", "--json"])
    rows = json.loads(out)["result"]["report"]["rows"]
    assert status == 0
    assert rows[1]["gap"]["mid"].startswith("0.000153930650382834")
    assert float(rows[1]["gap"]["radius"]) < 1e-60


def test_check_all_small():
    status, out, _ = call(["check", "all", "--budget", "small"])
    assert status == 0
    assert "FAIL" not in out


def test_check_main_recursion():
    assert call(["check", "main-recursion", "--genus", "1", "--points", "2"])[0] == 0
    status, _, err = call(["check", "main-recursion", "--genus", "1", "--points", "1"])
    assert status == 2 and "H_{0,2}" in err


def test_invalid_inputs_exit_2():
    assert call(["hurwitz", "--genus", "0", "--mu", "0"])[0] == 2
    assert call(["apery", "--n", "12", "--report", "--bits", "64"])[0] == 2
    assert call(["hodge", "--genus", "0", "--points", "2"])[0] == 2
    with pytest.raises(SystemExit) as e:
        run(["hurwitz", "--genus", "0", "--mu", "1", "--bogus"], io.StringIO(), io.StringIO())
    assert e.value.code == 2


def test_hodge_json_schema():
    status, out, _ = call(["hodge", "--genus", "1", "--points", "1", "--json"])
    br = json.loads(out)["result"]["brackets"]
    assert {"n": [1], "j": 0, "value": {"num": "1", "den": "24"}} in br


def test_xi_and_csv():
    status, out, _ = call(["xi", "--n", "2", "--csv"])
    assert out.splitlines()[0] == "power,coefficient"
    assert out.splitlines()[-1] == "5,3/1"


def test_catalan_and_invert():
    assert call(["catalan", "--order", "6"])[1].startswith("1 1 2 5 14 42\n")
    status, out, _ = call(["invert", "--order", "4"])
    assert status == 0 and "x^4: 8/3" in out


def test_determinism():
    argv = ["hodge", "--genus", "1", "--points", "2", "--json"]
    assert call(argv)[1] == call(argv)[1]


def test_cache_round_trip(tmp_path, monkeypatch):
    from specurve import cli
    from specurve.hurwitz import MemoStore

    path = tmp_path / "cache.txt"
    monkeypatch.setenv("SPECURVE_CACHE", str(path))
    first = call(["hodge", "--genus", "1", "--points", "2", "--json"])[1]
    assert path.exists()
    seen = []
    real = cli._store

    def spy(args):
        s = real(args)
        seen.append(s)
        return s

    monkeypatch.setattr(cli, "_store", spy)
    second = call(["hodge", "--genus", "1", "--points", "2", "--json"])[1]
    assert first == second
    assert seen[0].computed == 0 and len(seen[0]) > 0
    # the flag overrides the environment
    other = tmp_path / "other.txt"
    call(["hurwitz", "--genus", "0", "--mu", "1", "--cache", str(other)])
    assert other.exists() and len(MemoStore(other)) == 1

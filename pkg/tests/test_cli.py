import json
import subprocess
import sys
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "dp": ["dp", "--p", "2", "72", "--json"],
    "dp_symbolic": ["dp", "--p", "2", "5*2^(1*2^3)", "--json"],
    "d": ["d", "1647082", "--json"],
    "ord_seq": ["ord-seq", "--p", "3", "45", "--terms", "6", "--json"],
    "inc_profile": ["inc-profile", "--p", "2", "9", "--json"],
    "period": ["period", "--p", "3", "3^9", "--json"],
    "classify": ["classify", "--p", "2", "8", "--json"],
    "reverse": ["reverse", "--p", "2", "1", "0", "0", "--json"],
    "anti": ["anti", "--p", "2", "5120", "--json"],
    "count_anti": ["count-anti", "--p", "2", "12", "--json"],
    "count_anti_rational": ["count-anti-rational", "--p", "2", "448", "--json"],
    "construct": ["construct", "--p", "2", "--n", "3", "--k0", "0", "--json"],
    "construct_m": ["construct", "--p", "2", "--n", "2", "--m", "2", "--json"],
    "verify_sweep": ["verify-sweep", "--p", "2", "--range", "50", "--json"],
    "verify_inc": ["verify-inc", "--p", "3", "9", "--terms", "12", "--json"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(cli, name):
    code, out, _ = cli(*GOLDEN_CASES[name])
    assert code == 0
    assert out == (GOLDEN / f"{name}.json").read_text()
    json.loads(out)


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["dp", "--p", "2", "72"], "108"),
        (["count-anti", "--p", "2", "12"], "2"),
        (["d", "72"], "156"),
        (["ord-seq", "--p", "2", "4096", "--terms", "5"], "12 13 12 13 12"),
        (["ord-seq", "--p", "3", "18", "--terms", "4"], "2 1 0 inf"),
        (["inc-profile", "--p", "2", "9"], "prefix=1; S(3)[0]; S(1)[0]; tail=S(1) period=1"),
        (["classify", "--p", "2", "12"], "fixed_point 12"),
        (["classify", "--p", "2", "-48"], "diverges_negative"),
        (["classify", "--p", "2", "0"], "zero"),
        (["reverse", "--p", "2", "0", "0", "0"], "8"),
        (["period", "--p", "2", "4096"], "2"),
        (["dp", "--p", "2", "-48"], "-96"),
        (["verify-inc", "--p", "2", "12", "--terms", "10"], "PASS"),
    ],
)
def test_text_output(cli, argv, expected):
    code, out, _ = cli(*argv)
    assert code == 0
    assert out.strip() == expected


def test_construct_json(cli):
    code, out, _ = cli("construct", "--p", "2", "--n", "3", "--k0", "0", "--json")
    payload = json.loads(out)
    assert (code, payload["b0"], payload["a0"], payload["count"]) == (0, 11, 5, 3)


def test_anti_human(cli):
    code, out, _ = cli("anti", "--p", "2", "5120")
    assert out.splitlines() == ["count=2", "1*2^(5*2^1) = 1024  c=0", "5*2^(1*2^3) = 1280  c=1"]


@pytest.mark.parametrize(
    "argv,token",
    [
        (["dp", "--p", "4", "8"], "4"),
        (["dp", "--p", "2", "1*2^(5"], "1*2^(5"),
        (["dp", "--p", "2", "--bogus", "3"], "--bogus"),
        (["anti", "--p", "2", "0"], "infinite"),
        (["frobnicate"], "frobnicate"),
        (["reverse", "--p", "2", "0", "x"], "'x'"),
        (["reverse", "--p", "2", "0", "5"], "[0, 1]"),
        (["construct", "--p", "2", "--n", "2", "--k0", "3"], "k0 = 3"),
        (["period", "--p", "2", "3^4"], "expected p=2"),
    ],
)
def test_invalid_input_exit_2(cli, argv, token):
    code, out, err = cli(*argv)
    assert code == 2
    assert out == ""
    assert len(err.strip().splitlines()) == 1
    assert token in err


def test_size_guard_exit_3(cli):
    code, _, err = cli("construct", "--p", "2", "--n", "6", "--k0", "0")
    assert code == 3
    assert "size guard" in err
    code, _, _ = cli("reverse", "--p", "2", "0", "1", "1", "1", "1", "1")
    assert code == 3


def test_verify_sweep_range_10000(cli):
    code, out, _ = cli("verify-sweep", "--p", "2", "--range", "10000", "--json")
    assert code == 0
    assert json.loads(out)["mismatches"] == []


def test_verify_sweep_jobs_identical(cli, tmp_path):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"sweep{jobs}.jsonl"
        code, out, _ = cli("verify-sweep", "--p", "3", "--range", "200", "--jobs", jobs, "--out", str(path))
        assert code == 0
        outs.append((out, path.read_bytes()))
    assert outs[0] == outs[1]


def test_verify_inc_failure_exit_4(cli, monkeypatch):
    from apderiv import orbit

    real = orbit.segment
    monkeypatch.setattr(orbit, "segment", lambda p, k: real(p, k + 1))
    code, out, _ = cli("verify-inc", "--p", "2", "12", "--terms", "10")
    assert code == 4
    assert out.startswith("FAIL")


def test_verify_sweep_mismatch_exit_4(cli, monkeypatch):
    from apderiv import oracle

    real = oracle.anti_derivatives

    def broken(p, y):
        s = real(p, y)
        return s if y != 12 else real(p, 13)

    monkeypatch.setattr(oracle, "anti_derivatives", broken)
    code, out, _ = cli("verify-sweep", "--p", "2", "--range", "20")
    assert code == 4
    assert "mismatches=1" in out


def test_version(capsys):
    from apderiv.cli import run

    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("apderiv ")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "apderiv", "dp", "--p", "2", "72"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "108\n"

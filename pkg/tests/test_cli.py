import json

import pytest

from pachner.cli import main, parse_seeds, UsageError
from pachner.cochain import random_generic_cocycle, save_cocycle


@pytest.mark.parametrize("spec, seeds", [("1..3", [1, 2, 3]), ("5", [5]), ("1,4,9", [1, 4, 9]),
                                         ("1..2,7", [1, 2, 7])])
def test_parse_seeds(spec, seeds):
    assert parse_seeds(spec) == seeds


@pytest.mark.parametrize("spec", ["3..1", "a", "1..", ""])
def test_parse_seeds_rejects(spec):
    with pytest.raises(UsageError):
        parse_seeds(spec)


def test_verify_seed_range(capsys):
    assert main(["verify", "--seeds", "1..10", "--tol", "1e-8"]) == 0
    out = capsys.readouterr().out
    assert "10/10 passed" in out


def test_verify_json(capsys):
    assert main(["verify", "--seeds", "1..3", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [r["seed"] for r in data] == [1, 2, 3]
    assert all(r["passed"] for r in data)


def test_verify_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["verify", "--seed", "4", "--out", str(out)]) == 0
    assert json.loads(out.read_text())[0]["seed"] == 4


@pytest.mark.parametrize("mutation", ["alpha", "denominator"])
def test_verify_mutation_exit_1(mutation, capsys):
    assert main(["verify", "--break-sign", mutation]) == 1


def test_verify_threads_deterministic(monkeypatch, capsys):
    def run():
        assert main(["verify", "--seeds", "1..4", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        for r in data:
            r.pop("timings_ms")
        return data
    serial = run()
    monkeypatch.setenv("PACHNER_THREADS", "2")
    assert run() == serial


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("PACHNER_THREADS", "many")
    assert main(["verify", "--seeds", "1..2"]) == 2


def test_verify_unreachable_delta(capsys):
    assert main(["verify", "--seed", "1", "--delta", "100"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_cocycle_file(tmp_path, capsys):
    path = tmp_path / "c.json"
    save_cocycle(random_generic_cocycle(9), path)
    assert main(["verify", "--cocycle", str(path), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


@pytest.mark.parametrize("content, needle", [
    ("{\n  \"nu\": [1,\n", "line 3"),
    ('{"nu": {"12": [1, 0]}}', "missing edges"),
    ('{"omega": {"123": "x"}}', "123"),
    ("[]", "JSON object"),
])
def test_verify_malformed_cocycle(tmp_path, capsys, content, needle):
    path = tmp_path / "bad.json"
    path.write_text(content)
    assert main(["verify", "--cocycle", str(path)]) == 2
    assert needle in capsys.readouterr().err


def test_verify_missing_file(tmp_path, capsys):
    assert main(["verify", "--cocycle", str(tmp_path / "nope.json")]) == 2


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["verify", "--tol", "-1"],
                                  ["verify", "--seeds", "x"], ["verify", "--break-sign", "beta"],
                                  ["probe"], ["selftest", "--only", "nope"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_selftest_only(capsys):
    assert main(["selftest", "--only", "Fskew"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 and out[0].startswith("PASS Fskew")


def test_selftest_json(capsys):
    assert main(["selftest", "--seed", "42", "--json", "--only", "cocycle,relation"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["seed"] == 42 and data["passed"]
    assert [c["name"] for c in data["checks"]] == ["cocycle", "relation"]


def test_selftest_mutation(capsys):
    assert main(["selftest", "--only", "Fskew", "--break-sign", "alpha"]) == 1


@pytest.mark.parametrize("target, order", [("phi@Du", "+2"), ("F12@Du", "-1"), ("F12@Dt+2345", "+1")])
def test_probe(target, order, capsys):
    assert main(["probe", "--target", target]) == 0
    out = capsys.readouterr().out
    assert out.startswith("epsilon,abs_value,log_fit_order,residual")
    assert f"order {order}" in out and "PASS" in out


def test_probe_csv_file(tmp_path, capsys):
    path = tmp_path / "ladder.csv"
    assert main(["probe", "--target", "phi@Dt+1235", "--out", str(path)]) == 0
    assert len(path.read_text().splitlines()) == 6


@pytest.mark.parametrize("target", ["phi", "phi@Dx", "psi@Du", "F12@DuK7"])
def test_probe_bad_target(target, capsys):
    assert main(["probe", "--target", target]) == 2


def test_probe_deterministic(capsys):
    main(["probe", "--target", "phi@Du", "--seed", "5"])
    a = capsys.readouterr().out
    main(["probe", "--target", "phi@Du", "--seed", "5"])
    assert capsys.readouterr().out == a


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "pachner", "selftest", "--only", "cocycle"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS cocycle" in proc.stdout

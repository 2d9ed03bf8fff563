import json
import subprocess
import sys

import pytest

from a22ps.cli import CACHE_ENV, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def entries(text):
    return {tuple(e[:2]): e[2] for e in json.loads(text)["entries"]}


def test_dims_examples(capsys):
    code, out, _ = run(capsys, "dims", "--side", "presentation", "--k", "1", "--i", "0",
                       "--max-charge", "3", "--max-4w", "12", "--format", "json")
    assert code == 0 and entries(out)[(1, 1)] == 1
    code, out, _ = run(capsys, "dims", "--k", "1", "--i", "0", "--max-charge", "3", "--max-4w", "8")
    assert entries(out)[(0, 0)] == 1
    code, out, _ = run(capsys, "dims", "--side", "module", "--k", "2", "--i", "2",
                       "--max-charge", "3", "--max-4w", "8")
    assert code == 0 and entries(out)[(1, 1)] == 0


def test_dims_formats(capsys):
    _, csv_out, _ = run(capsys, "dims", "--k", "1", "--max-charge", "2", "--max-4w", "4", "--format", "csv")
    assert csv_out.splitlines()[0] == "charge,weight_x4,dim"
    assert "1,1,1" in csv_out.splitlines()
    code, text_out, _ = run(capsys, "dims", "--k", "1", "--max-charge", "2", "--max-4w", "4", "--format", "text")
    assert code == 0 and text_out.strip()


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "presentation", "--k", "2", "--i", "0", "--max-charge", "4", "--max-4w", "12")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "verify", "recursions", "--k", "1")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "verify", "proposition", "--k", "2", "--i", "1", "--max-charge", "5", "--max-4w", "16")
    assert code == 0 and json.loads(out)["reports"][0]["mismatches"] == []
    code, out, _ = run(capsys, "verify", "sequences", "--k", "1", "--max-charge", "4", "--max-4w", "12")
    assert code == 0
    code, out, _ = run(capsys, "verify", "lemmas", "--k", "1", "--max-charge", "4", "--max-4w", "10")
    assert code == 0


def test_verify_reports_mismatch(capsys):
    # the power form drops charge-2 extras at i = k
    code, out, _ = run(capsys, "verify", "proposition", "--k", "2", "--i", "2", "--max-charge", "4", "--max-4w", "8")
    assert code == 1
    assert json.loads(out)["reports"][0]["mismatches"]


def test_conjecture_examples(capsys):
    code, out, _ = run(capsys, "conjecture", "nahm", "--k", "1", "--N", "6")
    rep = json.loads(out)["reports"][0]
    assert code == 0 and rep["status"] == "conjecture-pass"
    assert rep["sides"]["nahm"] == [[e, 1, 1] for e in (0, 1, 3, 4, 5, 6)]
    code, out, _ = run(capsys, "conjecture", "nahm", "--k", "2", "--N", "16")
    rep = json.loads(out)["reports"][0]
    assert set(rep["sides"]) == {"character", "nahm", "product"}
    assert rep["status"] == "conjecture-pass"
    code, out, _ = run(capsys, "conjecture", "sequences", "--k", "2", "--i", "1", "--max-charge", "4", "--max-4w", "10")
    assert code == 0 and json.loads(out)["status"] in ("conjecture-pass", "conjecture-fail")


def test_generators_export(capsys):
    code, out, _ = run(capsys, "generators", "--k", "1", "--i", "1", "--max-charge", "3", "--max-4w", "6")
    assert code == 0
    json.loads(out)


@pytest.mark.parametrize("argv", [
    ["dims", "--k", "0"],
    ["dims", "--k", "1", "--i", "2"],
    ["dims", "--k", "2", "--i", "1", "--j", "2"],
    ["dims", "--k", "1", "--max-charge", "0"],
    ["bogus", "--k", "1"],
    ["dims", "--k", "1", "--convention", "Other"],
])
def test_config_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_truncation_exit(capsys):
    code, _, err = run(capsys, "conjecture", "nahm", "--k", "2", "--N", "16", "--max-charge", "4")
    assert code == 3 and "error" in err


def test_cache_corruption_exit(capsys, tmp_path):
    args = ["dims", "--k", "1", "--max-charge", "2", "--max-4w", "4", "--cache-dir", str(tmp_path)]
    assert run(capsys, *args)[0] == 0
    victim = sorted(tmp_path.rglob("*.json"))[0]
    victim.write_text("{garbage")
    code, _, err = run(capsys, *args)
    assert code == 4 and "corrupt" in err


def test_cold_warm_identical(capsys, tmp_path):
    for argv in (["dims", "--k", "2", "--max-charge", "4", "--max-4w", "10"],
                 ["dims", "--side", "module", "--k", "2", "--i", "1", "--max-charge", "4", "--max-4w", "10"],
                 ["verify", "recursions", "--k", "1", "--max-charge", "4", "--max-4w", "12"]):
        plain = run(capsys, *argv)
        cold = run(capsys, *argv, "--cache-dir", str(tmp_path))
        warm = run(capsys, *argv, "--cache-dir", str(tmp_path))
        assert plain == cold == warm


def test_env_cache_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    run(capsys, "dims", "--k", "1", "--max-charge", "2", "--max-4w", "4")
    assert list(tmp_path.rglob("*.json"))


def test_output_file(capsys, tmp_path):
    target = tmp_path / "t.json"
    code, out, _ = run(capsys, "dims", "--k", "1", "--max-charge", "2", "--max-4w", "4", "--output", str(target))
    assert code == 0 and out == ""
    assert entries(target.read_text())[(0, 0)] == 1


def test_parallel_matches_serial(capsys):
    argv = ["verify", "presentation", "--k", "2", "--max-charge", "3", "--max-4w", "8"]
    assert run(capsys, *argv) == run(capsys, *argv, "--jobs", "2")


def test_entry_point_subprocess():
    argv = [sys.executable, "-m", "a22ps", "dims", "--k", "1", "--max-charge", "2", "--max-4w", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and entries(a.decode())[(1, 1)] == 1

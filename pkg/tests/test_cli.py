"""Command-line surface: payloads, formats, and the exit-code contract."""

import json
import subprocess
import sys

import pytest

import phisigma.configs
from phisigma import cli
from phisigma.configs import build_config, save_config
from phisigma.preimages import sigma_preimages

SIGMA_R2_MATRIX = ((564089, 128339), (505493, 165383))


def run_main(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_proc(*args):
    proc = subprocess.run([sys.executable, "-m", "phisigma.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_inverse_phi_payload(capsys):
    code, out, _ = run_main(capsys, "inverse", "phi", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["solutions"] == [5, 8, 10, 12]
    assert payload["multiplicity"] == 4
    assert payload["map"] == "phi" and payload["target"] == 4
    # one sorted-key JSON object per line
    assert out.count("\n") == 1
    assert list(payload) == sorted(payload)


def test_inverse_sigma_payload(capsys):
    code, out, _ = run_main(capsys, "inverse", "sigma", "12")
    assert code == 0
    assert json.loads(out)["solutions"] == [6, 11]


def test_inverse_empty_set_is_success(capsys):
    code, out, _ = run_main(capsys, "inverse", "phi", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["solutions"] == [] and payload["multiplicity"] == 0


def test_inverse_rejects_nonpositive(capsys):
    code, _, err = run_main(capsys, "inverse", "phi", "0")
    assert code == 2
    assert err.strip()


def test_multiplicity_payload(capsys):
    code, out, _ = run_main(capsys, "multiplicity", "sigma", "12")
    assert code == 0
    assert json.loads(out)["multiplicity"] == 2


def test_table_streams_rows(capsys):
    code, out, _ = run_main(capsys, "table", "--map", "phi",
                            "--k", "1..3", "--bound", "100")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["k"] for r in rows] == [1, 2, 3]
    assert [r["minimal_m"] for r in rows] == [None, 1, 2]


def test_min_m_found_and_absent(capsys):
    code, out, _ = run_main(capsys, "min-m", "--map", "sigma",
                            "--k", "2", "--bound", "1e3")
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is True and payload["minimal_m"] == 12
    code, out, _ = run_main(capsys, "min-m", "--map", "phi",
                            "--k", "1", "--bound", "100")
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is False and payload["minimal_m"] is None


def test_csv_format(capsys):
    code, out, _ = run_main(capsys, "inverse", "phi", "4", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header.split(",")[0] == "command"
    assert "\"[5, 8, 10, 12]\"" in row


def test_natural_accepts_scientific(capsys):
    code, out, _ = run_main(capsys, "prime-pairs", "--k", "2", "--x", "1e2")
    assert code == 0
    assert json.loads(out)["x"] == 100


def test_verify_config_reports_failure_as_data(tmp_path, capsys):
    path = tmp_path / "bad.json"
    save_config(build_config([[11, 13], [17, 19]], "sigma"), str(path))
    code, out, _ = run_main(capsys, "verify-config", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["overall"] is False
    assert payload["cond_ii"]["witness"] == {"pi": 3, "b": 2, "divisor": 13}
    assert payload["cond_iii"]["witness"] == {"d1": 11, "d2": 2}


def test_certify_rejects_unverified_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    save_config(build_config([[11, 13], [17, 19]], "sigma"), str(path))
    code, _, err = run_main(capsys, "certify", str(path))
    assert code == 2
    assert "condition" in err


def test_certify_missing_file(capsys):
    code, _, err = run_main(capsys, "certify", "/nonexistent/cfg.json")
    assert code == 2
    assert err.strip()


def test_search_verify_certify_round_trip(tmp_path, capsys):
    path = tmp_path / "found.json"
    code, out, _ = run_main(capsys, "search-config", "--lemma", "2", "--r", "2",
                            "--pool", "1e6", "--budget", "200000",
                            "--seed", "0", "--out", str(path))
    assert code == 0
    found = json.loads(out)
    assert found["found"] is True
    assert found["config"]["matrix"] == [list(r) for r in SIGMA_R2_MATRIX]
    assert found["report"]["overall"] is True
    assert found["stats"]["probes"] > 0

    code, out, _ = run_main(capsys, "verify-config", str(path))
    assert code == 0
    assert json.loads(out)["overall"] is True

    code, out, _ = run_main(capsys, "certify", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["predicted_multiplicity"] == 2
    assert payload["observed_multiplicity"] == 2
    assert payload["target"] == 24208745495466589560196
    assert payload["solutions"] == [24208745495150259165769, 24208745495154600426217]


def test_search_absent_is_success(capsys):
    code, out, _ = run_main(capsys, "search-config", "--lemma", "2", "--r", "2",
                            "--pool", "1e5", "--budget", "40", "--seed", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is False
    assert payload["stats"]["probes"] >= 40


def test_theorem2_payload(capsys):
    code, out, _ = run_main(capsys, "theorem2", "--m", "1", "--r", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["l"] == 1
    assert payload["certificate"]["observed_multiplicity"] == 2


def test_corollary3_plan_payload(capsys):
    code, out, _ = run_main(capsys, "corollary3-plan", "--k", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["invocation"] == "theorem2 --m 1 --r 3"
    code, _, err = run_main(capsys, "corollary3-plan", "--k", "7")
    assert code == 2


def test_capacity_exit_code(capsys):
    code, _, err = run_main(capsys, "table", "--map", "phi",
                            "--k", "1..1", "--bound", "1e5")
    assert code == 3
    assert "capacity" in err.lower()


def test_certification_failure_exit_code(tmp_path, capsys, monkeypatch):
    cfg = build_config(SIGMA_R2_MATRIX, "sigma")
    path = tmp_path / "good.json"
    save_config(cfg, str(path))
    real = sigma_preimages(cfg.target)
    fake = type(real)(real.target, real.map_kind, real.solutions[:1])
    monkeypatch.setattr(phisigma.configs, "sigma_preimages", lambda m: fake)
    code, out, err = run_main(capsys, "certify", str(path))
    assert code == 4
    payload = json.loads(out)
    assert payload["predicted"] == 2 and payload["observed"] == 1
    assert payload["target"] == cfg.target
    assert err.strip()


def test_argparse_errors_exit_two():
    for args in (("sieve-count", "--x", "1e3", "--a", "3", "--alpha", "1/8"),
                 ("inverse", "tau", "4"),
                 ("no-such-command",)):
        with pytest.raises(SystemExit) as info:
            cli.main(list(args))
        assert info.value.code == 2


def test_repeated_runs_byte_identical():
    args = ("search-config", "--lemma", "2", "--r", "2",
            "--pool", "1e5", "--budget", "50000", "--seed", "9")
    first = run_proc(*args)
    second = run_proc(*args)
    assert first == second
    assert first[0] == 0
    third = run_proc("lemma3-constant")
    fourth = run_proc("lemma3-constant")
    assert third == fourth

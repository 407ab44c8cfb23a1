import json

import pytest

from rank2sheets.cli import main, parse_primes, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_flag_count_g2(capsys):
    code, rep = run_json(capsys, "flag", "count", "--kind", "G2", "--parabolic", "B", "--q", "3")
    assert code == 0 and rep["count"] == 1456 and rep["schema_version"] == 1


def test_flag_count_a1xa1(capsys):
    code, rep = run_json(capsys, "flag", "count", "--kind", "A1xA1", "--q", "3")
    assert code == 0 and rep["count"] == 16


def test_flag_orbits_borel(capsys):
    code, rep = run_json(capsys, "flag", "orbits", "--kind", "A2", "--subgroup", "borel", "--q", "3")
    assert code == 0 and rep["count"] == 6


def test_flag_fixed(capsys):
    code, rep = run_json(capsys, "flag", "fixed", "--kind", "G2", "--parabolic", "P_a", "--subgroup", "u_beta", "--q", "5")
    assert code == 0 and rep["per_cell"]["sbsasbsasb"] == 0


def test_flag_rejects_even_q(capsys):
    code, _, err = run(capsys, "flag", "count", "--kind", "A2", "--q", "4")
    assert code == 2 and "odd prime" in err


def test_sheets_check_p1(capsys):
    code, rep = run_json(capsys, "sheets", "check", "fixtures/p1_torus.json")
    assert code == 0 and rep["relations_b00"]["braid"] and len(rep["b00"]) == 1


def test_sheets_check_diagonal(capsys):
    code, rep = run_json(capsys, "sheets", "check", "fixtures/sl2xsl2_diag.json")
    assert code == 0 and len(rep["b00"]) == 2


def test_sheets_validate_bad_u_block(capsys):
    code, out, _ = run(capsys, "sheets", "validate", "fixtures/bad_u_block.json")
    assert code == 1 and "U-block needs rank Z = rank Y" in out


@pytest.mark.parametrize("name", ["braid_violator", "disconnected", "rank_conflict"])
def test_sheets_check_corrupted(capsys, name):
    code, rep = run_json(capsys, "sheets", "check", f"fixtures/{name}.json")
    assert code == 1 and rep["status"] == "fail"


def test_sheets_act(capsys):
    code, rep = run_json(capsys, "sheets", "act", "fixtures/braid_violator.json", "--root", "alpha", "--id", "X")
    assert code == 0 and rep["action"] == {"alpha": {"X": "Z1"}}


def test_sheets_missing_file(capsys):
    code, _, err = run(capsys, "sheets", "validate", "nowhere.json")
    assert code == 2 and "no such dataset" in err


def test_sheets_generate(capsys, tmp_path):
    out = tmp_path / "d.json"
    code, rep = run_json(capsys, "sheets", "generate", "--kind", "A1xA1", "--subgroup", "diagonal",
                         "--top-rank", "1", "--dataset", str(out))
    assert code == 0 and rep["heuristic"]
    code, rep = run_json(capsys, "sheets", "check", str(out))
    assert code == 0


def test_verify_normal_generation(capsys):
    code, out, _ = run(capsys, "verify", "normal-generation", "--kind", "A1xA1")
    assert code == 0 and "normal-generation: pass" in out


def test_verify_levi_refuses_three(capsys):
    code, _, err = run(capsys, "verify", "levi", "--primes", "3")
    assert code == 2 and "p = 3" in err


def test_verify_all_writes_five_reports(capsys, tmp_path):
    code, rep = run_json(capsys, "verify", "all", "--primes", "5,7", "--report-dir", str(tmp_path))
    assert len(rep["checks"]) == 5
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(f"{c['check']}.json" for c in rep["checks"])
    # exit status mirrors the aggregate
    assert code == (0 if rep["status"] == "pass" else 1)


def test_reports_are_deterministic(capsys):
    _, a = run_json(capsys, "verify", "other-a1", "--primes", "5,7")
    _, b = run_json(capsys, "verify", "other-a1", "--primes", "5,7")
    assert a == b and a["seed"] == b["seed"]


def test_env_primes(capsys, monkeypatch):
    monkeypatch.setenv("RANK2_PRIMES", "5,7")
    _, rep = run_json(capsys, "verify", "sym3")
    assert rep["primes"] == [5, 7]


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "flag", "count", "--kind", "A2", "--q", "3", "--format", "json", "--output", str(out))
    assert code == 0 and json.loads(out.read_text())["count"] == 52


def test_conventions(capsys, tmp_path):
    out = tmp_path / "C.md"
    code, _, _ = run(capsys, "conventions", "--write", str(out))
    text = out.read_text()
    assert code == 0 and "## G2" in text and "3a+2b" in text


def test_parse_primes():
    assert parse_primes("5, 7") == (5, 7)
    assert parse_primes("") is None
    with pytest.raises(UsageError):
        parse_primes("5,9")


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2

import csv
import io
import json

import pytest

from moonexp.cli import CSV_COLUMNS, UsageError, parse_primes, render_report, run_command
from moonexp.monster import verify_prime


def _run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_primes():
    assert parse_primes("5..13") == [5, 7, 11, 13]
    assert parse_primes("2,3,5") == [2, 3, 5]
    with pytest.raises(UsageError):
        parse_primes("4")
    with pytest.raises(UsageError):
        parse_primes("281")
    assert parse_primes("281", allow_large=True) == [281]
    with pytest.raises(UsageError):
        parse_primes("x..y")


def test_verify_non_prime_is_usage_error(capsys):
    code, _, err = _run(capsys, "verify", "--primes", "4")
    assert code == 2 and "not prime" in err


def test_bad_flags_are_usage_errors(capsys):
    assert _run(capsys, "verify", "--window", "5")[0] == 2
    assert _run(capsys, "verify", "--K", "1")[0] == 2
    assert _run(capsys, "frobnicate")[0] == 2
    assert _run(capsys, "verify", "--format", "xml")[0] == 2


def test_verify_json(capsys):
    code, out, _ = _run(capsys, "verify", "--primes", "5..13", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["config_echo"]["primes"] == [5, 7, 11, 13]
    res = doc["results"]
    assert [r["p"] for r in res] == [5, 7, 11, 13]
    for r in res:
        assert r["rhs11"] == r["vp_monster"] == r["rhs12"] and r["pass"] is True
    keys = list(res[0])
    assert keys[:14] == [
        "p", "vp_monster", "term_plus", "term_p", "term_p2", "rhs11", "rhs12", "m_p", "s1", "s2_pairs",
        "table2_row", "deligne", "remarks", "pass",
    ]
    assert set(res[0]["deligne"]) >= {"K", "a1_valuations", "residual_valuation"}
    assert set(res[0]["remarks"]) == {"r11", "r13a", "r13b", "r13c", "faber_probe"}


def test_p2_record(capsys):
    code, out, _ = _run(capsys, "verify", "--primes", "2", "--format", "json")
    rec = json.loads(out)["results"][0]
    assert code == 0
    assert rec["vp_monster"] == 46 and rec["rhs11"] == 36 and rec["expected_discrepancy"] is True


def test_empty_report(capsys):
    code, out, _ = _run(capsys, "verify", "--primes", "24..28", "--format", "json")
    assert code == 0 and json.loads(out)["results"] == []
    assert json.loads(render_report([], "json"))["results"] == []


def test_csv_projection(capsys):
    code, out, _ = _run(capsys, "verify", "--primes", "37,41", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == CSV_COLUMNS and len(rows) == 3
    rec = dict(zip(rows[0], rows[2]))
    assert rec["p"] == "41" and rec["pass"] == "true" and rec["rhs11"] == "1"


def test_text_report(capsys):
    code, out, _ = _run(capsys, "verify", "--primes", "3,37")
    assert code == 0 and "PASS" in out and out.count("\n") == 3


def test_mismatch_gives_exit_1(capsys, monkeypatch):
    import moonexp.cli as cli

    def bad(primes, config):
        reps = [verify_prime(p, config) for p in primes]
        reps[0].passed = False
        return reps

    monkeypatch.setattr(cli, "verify_primes", bad)
    assert _run(capsys, "verify", "--primes", "5")[0] == 1


def test_consistency_error_gives_exit_3(capsys, monkeypatch):
    import moonexp.cli as cli
    from moonexp.errors import ConsistencyError

    def boom(primes, config):
        raise ConsistencyError("oracle disagreement")

    monkeypatch.setattr(cli, "verify_primes", boom)
    code, _, err = _run(capsys, "verify", "--primes", "5")
    assert code == 3 and "oracle disagreement" in err


def test_ss_command(capsys):
    code, out, _ = _run(capsys, "ss", "--prime", "71", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["table2_row"] == {"-744": 37, "984": 61, "other": [6, 7, 14, 32, 54]}
    code, out, _ = _run(capsys, "ss", "--prime", "71")
    assert "37" in out and "6, 7, 14, 32, 54" in out
    assert _run(capsys, "ss", "--prime", "9")[0] == 2


def test_series_command(capsys):
    code, out, _ = _run(capsys, "series", "j1", "--prec", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["lo"] == -1 and doc["coeffs"] == [1, 0, 196884, 21493760]
    code, out, _ = _run(capsys, "series", "J", "--N", "13", "--prec", "2")
    assert out.splitlines() == ["-1\t1", "0\t0", "1\t-1"]
    assert _run(capsys, "series", "t")[0] == 2


def test_deligne_command(capsys):
    code, out, _ = _run(capsys, "deligne", "--prime", "11", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["a1_valuations"] == {"4": 3, "5": 2}
    assert doc["residual_valuation"] >= 4
    assert _run(capsys, "deligne", "--prime", "37")[0] == 2


def test_probe_command(capsys):
    code, out, _ = _run(capsys, "probe-faber", "--primes", "5,13", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and [d["a"] for d in doc] == [3, 1]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = _run(capsys, "verify", "--primes", "7", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"][0]["p"] == 7


def test_render_rejects_unknown_format():
    with pytest.raises(UsageError):
        render_report([], "yaml")

import json
import subprocess
import sys

import pytest

from ideal_zeta.cli import config_from_args, main, reserialize, run
from ideal_zeta.exactalg import RationalFunction, rf_equal
from ideal_zeta.oracle import catalog_table
from ideal_zeta.zeta import zeta_ideal


def call(*argv):
    return run(config_from_args(list(argv)))


def test_series_heisenberg_values():
    res = call("series", "g1,1", "--degree", "2", "--primes", "2", "--format", "json")
    assert res.code == 0
    doc = json.loads(res.stdout)
    assert doc["kind"] == "series" and doc["values"]["2"] == [1, 3, 7]


def test_series_plain_lists_primes():
    res = call("series", "h1", "--degree", "1", "--primes", "2,3")
    assert res.code == 0
    assert res.stdout.splitlines()[1].endswith("p=2: 3  p=3: 4")


@pytest.mark.parametrize("fmt", ["plain", "latex", "json"])
def test_compute_formats(fmt):
    res = call("compute", "g1,1", "--format", fmt, "--terms")
    assert res.code == 0 and res.stdout
    if fmt == "json":
        doc = json.loads(res.stdout)
        assert doc["certified"] is True and [t["w"] for t in doc["terms"]] == ["01"]
        assert rf_equal(RationalFunction.from_json_obj(doc["zeta"]), zeta_ideal("g1,1"))


def test_compute_json_round_trip_is_byte_identical():
    text = call("compute", "f2,3 x Z^1", "--format", "json").stdout
    assert reserialize(text) == text


def test_check_funeq_and_terms():
    res = call("check", "g2,2", "--check", "dwrho", "--format", "json")
    doc = json.loads(res.stdout)
    assert res.code == 0 and doc["holds"] and len(doc["terms"]) == 8
    res = call("check", "h1 over f=2")
    assert res.code == 0 and "holds: True" in res.stdout


def test_check_genigusa_and_match():
    assert call("check", "(2,1)", "--check", "genigusa").code == 0
    assert call("check", "2", "--check", "match").code == 0
    assert call("check", "(1,2)", "--check", "match").code == 2


def test_oracle_rows_match():
    res = call("oracle", "g1,1", "--degree", "3", "--primes", "2,3", "--format", "json")
    rows = json.loads(res.stdout)["rows"]
    assert res.code == 0 and len(rows) == 8 and all(r["status"] == "match" for r in rows)


def test_oracle_over_extension():
    res = call("oracle", "h1 over f=2", "--degree", "2", "--primes", "2")
    assert res.code == 0 and res.stdout.count("match") == 3


def test_oracle_budget_exit_code():
    res = call("oracle", "g2,2", "--degree", "4", "--budget", "100")
    assert res.code == 5 and "budget exceeded" in res.stdout


def test_oracle_only_for_bracket_table(tmp_path):
    path = tmp_path / "heis.json"
    path.write_text(json.dumps(catalog_table("g1,1", 2).to_json_obj()))
    res = call("oracle", str(path), "--degree", "2", "--format", "json")
    rows = json.loads(res.stdout)["rows"]
    assert res.code == 0 and [r["oracle"] for r in rows] == [1, 3, 7]
    assert all(r["status"] == "oracle-only" for r in rows)
    assert call("compute", str(path)).code == 2


@pytest.mark.parametrize("argv,code", [
    (("compute", "q9"), 2),
    (("series", "g1,1", "--degree", "-1"), 2),
    (("compute", "f2,6"), 3),
    (("compute", "g1,1[e=2]"), 4),
])
def test_exit_codes(argv, code):
    res = call(*argv)
    assert res.code == code and res.stdout is None and res.stderr


def test_bad_prime_list_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        config_from_args(["series", "g1,1", "--primes", "4"])
    assert exc.value.code == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "z.txt"
    assert main(["compute", "Z^2", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().strip() == str(zeta_ideal("Z^2"))


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ideal_zeta", "series", "Z^1", "--degree", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.count("\n") == 3
